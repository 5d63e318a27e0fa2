#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cce::lab {

// Fixed 12-significant-digit float formatting shared by the CSV and JSON
// emitters; regression outputs are compared byte-for-byte.
inline std::string format_g12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Minimal JSON value with insertion-ordered objects and %.12g numbers.
class Json {
public:
    static Json object() { Json j; j.type_ = Type::Obj; return j; }
    static Json array() { Json j; j.type_ = Type::Arr; return j; }
    static Json number(double v) { Json j; j.type_ = Type::Num; j.num_ = v; return j; }
    static Json integer(long long v) { Json j; j.type_ = Type::Int; j.int_ = v; return j; }
    static Json string(std::string s) { Json j; j.type_ = Type::Str; j.str_ = std::move(s); return j; }
    static Json boolean(bool b) { Json j; j.type_ = Type::Bool; j.bool_ = b; return j; }
    static Json null() { return Json(); }

    Json& set(const std::string& key, Json v) {
        members_.emplace_back(key, std::move(v));
        return *this;
    }
    Json& push(Json v) {
        items_.push_back(std::move(v));
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        out.push_back('\n');
        return out;
    }

private:
    enum class Type { Null, Bool, Int, Num, Str, Arr, Obj };
    Type type_ = Type::Null;
    bool bool_ = false;
    long long int_ = 0;
    double num_ = 0.0;
    std::string str_;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> items_;

    static void write_escaped(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out.push_back(c);
            }
        }
        out.push_back('"');
    }

    void write(std::string& out) const {
        switch (type_) {
            case Type::Null: out += "null"; break;
            case Type::Bool: out += bool_ ? "true" : "false"; break;
            case Type::Int: out += std::to_string(int_); break;
            case Type::Num: {
                const std::string s = format_g12(num_);
                // bare NaN/inf are not JSON; quote them
                if (s == "nan" || s == "inf" || s == "-inf") write_escaped(out, s);
                else out += s;
                break;
            }
            case Type::Str: write_escaped(out, str_); break;
            case Type::Arr: {
                out.push_back('[');
                for (size_t i = 0; i < items_.size(); ++i) {
                    if (i) out.push_back(',');
                    items_[i].write(out);
                }
                out.push_back(']');
                break;
            }
            case Type::Obj: {
                out.push_back('{');
                for (size_t i = 0; i < members_.size(); ++i) {
                    if (i) out.push_back(',');
                    write_escaped(out, members_[i].first);
                    out.push_back(':');
                    members_[i].second.write(out);
                }
                out.push_back('}');
                break;
            }
        }
    }
};

} // namespace cce::lab
