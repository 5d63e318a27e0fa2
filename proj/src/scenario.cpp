#include "cce/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "cce/blackhole.hpp"
#include "cce/cusp_glue.hpp"
#include "cce/curvature.hpp"
#include "cce/errors.hpp"
#include "cce/fg.hpp"
#include "cce/jsonout.hpp"
#include "cce/linear_fit.hpp"

namespace cce::lab {
namespace {

const std::map<std::string, std::set<std::string>>& kind_keys() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"verify", {"n", "k", "m", "r_max", "points", "tol"}},
        {"bh-fold", {"n"}},
        {"bh-preimages", {"n", "k", "beta"}},
        {"fg-extract", {"n", "k", "m", "r_max", "rho_max", "nodes", "span", "K", "refine"}},
        {"falloff", {"n", "k", "m", "r_max", "rho_lo", "rho_hi", "samples"}},
        {"glue-decay", {"n", "beta", "R", "w"}},
        {"cusp-rates", {"n", "beta", "s_min"}},
    };
    return table;
}

// Parameter access that records every resolved value (defaults included),
// so outputs echo a complete, re-runnable config.
class Params {
public:
    explicit Params(const Scenario& s) : s_(s) {}

    double num(const std::string& key, std::optional<double> fallback = {}) const {
        auto it = s_.params.find(key);
        if (it == s_.params.end()) {
            if (fallback) {
                resolved_[key] = format_g12(*fallback);
                return *fallback;
            }
            throw ConfigError("missing required parameter '" + key + "'");
        }
        try {
            size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing text");
            resolved_[key] = it->second;
            return v;
        } catch (const std::exception&) {
            throw ConfigError("parameter '" + key + "' is not a number: " + it->second);
        }
    }

    int integer(const std::string& key, std::optional<int> fallback = {}) const {
        const double v = num(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
        const int i = static_cast<int>(std::llround(v));
        if (std::abs(v - i) > 1e-12) throw ConfigError("parameter '" + key + "' must be an integer");
        return i;
    }

    std::vector<double> list(const std::string& key) const {
        auto it = s_.params.find(key);
        if (it == s_.params.end()) throw ConfigError("missing required parameter '" + key + "'");
        const auto values = parse_value_list(it->second);
        std::string joined;
        for (size_t i = 0; i < values.size(); ++i) joined += (i ? "," : "") + format_g12(values[i]);
        resolved_[key] = joined;
        return values;
    }

    bool has(const std::string& key) const { return s_.params.count(key) > 0; }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    const Scenario& s_;
    mutable std::map<std::string, std::string> resolved_;
};

void validate_keys(const Scenario& s) {
    const auto& table = kind_keys();
    auto it = table.find(s.kind);
    if (it == table.end()) throw ConfigError("unknown scenario kind '" + s.kind + "'");
    for (const auto& [key, value] : s.params) {
        (void)value;
        if (!it->second.count(key))
            throw ConfigError("unknown key '" + key + "' for scenario '" + s.kind + "'");
    }
}

std::string canonical_config(const Scenario& s) {
    std::string text = "kind=" + s.kind + "\n";
    for (const auto& [k, v] : s.params) text += k + "=" + v + "\n";
    text += "format=" + std::string(s.format == Format::Csv ? "csv" : "json") + "\n";
    text += "seed=" + std::to_string(s.seed) + "\n";
    return text;
}

Json config_json(const Scenario& s) {
    Json cfg = Json::object();
    cfg.set("kind", Json::string(s.kind));
    for (const auto& [k, v] : s.params) cfg.set(k, Json::string(v));
    cfg.set("format", Json::string(s.format == Format::Csv ? "csv" : "json"));
    cfg.set("seed", Json::integer(static_cast<long long>(s.seed)));
    return cfg;
}

std::string csv_preamble(const Scenario& s) {
    std::string out = "# kind=" + s.kind + "\n";
    for (const auto& [k, v] : s.params) out += "# " + k + "=" + v + "\n";
    out += "# format=csv\n# seed=" + std::to_string(s.seed) + "\n";
    out += "# config_hash=" + hash_hex(fnv1a64(canonical_config(s))) + "\n";
    return out;
}

// Flat summary row a sweep can tabulate; also the core of single-run output.
using Row = std::vector<std::pair<std::string, Json>>;

struct KindResult {
    Row summary;
    std::vector<std::pair<std::string, std::vector<Row>>> tables; // named row blocks
    int exit_code = 0;
    std::string note;
};

Json row_to_json(const Row& row) {
    Json o = Json::object();
    for (const auto& [k, v] : row) o.set(k, v);
    return o;
}

// Chart reference point: interior, and far enough in that the chart covers
// the largest rho the pipeline will sample (rho ~ 1/r for these families).
double chart_reference(const CohomOneMetric& g, double rho_needed) {
    const double mid = 0.5 * (g.x_lo + g.x_hi);
    return std::max(1.02 * g.x_lo, std::min(0.5 / rho_needed, mid));
}

std::string json_scalar_to_csv(const Json& j) {
    // reuse dump() and strip the trailing newline / quotes for plain strings
    std::string s = j.dump();
    s.pop_back();
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    if (s == "null") return "";
    return s;
}

KindResult run_verify(const Params& p) {
    const int n = p.integer("n");
    const int k = p.integer("k");
    const double m = p.num("m");
    const double r_max = p.num("r_max", 10.0);
    const int points = p.integer("points", 20);
    const double tol = p.num("tol", 1e-8);

    const CohomOneMetric g = bh::build_metric(n, k, m, r_max);
    const bh::BlackHoleParams bp = bh::black_hole_params(n, k, m);

    KindResult res;
    std::vector<Row> rows;
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
        const double span = g.x_hi - g.x_lo;
        const double r = g.x_lo + span * (i + 1) / (points + 1);
        const CurvatureReport rep = ricci_cohom_one(g, r);
        sup = std::max(sup, rep.einstein_residual);
        rows.push_back({{"r", Json::number(r)},
                        {"einstein_residual", Json::number(rep.einstein_residual)}});
    }
    res.tables.emplace_back("samples", std::move(rows));
    res.summary = {{"r_plus", bp.r_plus ? Json::number(*bp.r_plus) : Json::null()},
                   {"beta", std::isfinite(bp.beta) && bp.r_plus ? Json::number(bp.beta) : Json::null()},
                   {"residual_sup", Json::number(sup)}};
    if (!(sup < tol)) {
        res.exit_code = 3;
        res.note = "einstein residual " + format_g12(sup) + " exceeds tol " + format_g12(tol);
    }
    return res;
}

KindResult run_fold(const Params& p) {
    const bh::FoldData fd = bh::fold_point(p.integer("n"));
    KindResult res;
    res.summary = {{"r_fold", Json::number(fd.r_fold)},
                   {"m0", Json::number(fd.m0)},
                   {"beta0", Json::number(fd.beta0)},
                   {"beta0_closed_form", Json::number(fd.beta0_closed_form)},
                   {"matches_closed_form", Json::boolean(fd.matches_closed_form)}};
    return res;
}

KindResult run_preimages(const Params& p) {
    const int n = p.integer("n");
    const int k = p.integer("k");
    const double beta = p.num("beta");
    const auto masses = bh::beta_preimages(n, k, beta);

    KindResult res;
    std::vector<Row> rows;
    for (double m : masses) {
        const double rp = bh::horizon_radius(n, k, m);
        const double err = std::abs(bh::period_beta(n, k, rp) - beta);
        rows.push_back({{"m", Json::number(m)}, {"beta_residual", Json::number(err)}});
    }
    res.tables.emplace_back("preimages", std::move(rows));
    res.summary = {{"count", Json::integer(static_cast<long long>(masses.size()))},
                   {"m1", masses.size() > 0 ? Json::number(masses[0]) : Json::null()},
                   {"m2", masses.size() > 1 ? Json::number(masses[1]) : Json::null()}};
    return res;
}

KindResult run_fg_extract(const Params& p) {
    const int n = p.integer("n");
    const int k = p.integer("k");
    const double m = p.num("m");
    const double r_max = p.num("r_max", 10.0);

    fg::FgFitConfig cfg;
    cfg.rho_max = p.num("rho_max", cfg.rho_max);
    cfg.span = p.num("span", cfg.span);
    cfg.nodes = p.integer("nodes", cfg.nodes);
    if (p.has("K")) cfg.fit_order = p.integer("K");
    const double refine = p.num("refine", 1.0);
    if (refine != 1.0) cfg = cfg.refined(refine);

    const CohomOneMetric g = bh::build_metric(n, k, m, r_max);
    const fg::FGSeries s = fg::fg_extract(g, chart_reference(g, cfg.rho_max), cfg);

    KindResult res;
    std::vector<Row> rows;
    for (size_t j = 0; j < s.coeff.size(); ++j)
        rows.push_back({{"order", Json::integer(static_cast<long long>(j))},
                        {"c_theta", Json::number(s.coeff[j][0])},
                        {"c_fiber", Json::number(s.coeff[j][1])}});
    res.tables.emplace_back("coefficients", std::move(rows));
    res.summary = {{"trace_gn", Json::number(s.trace_gn)},
                   {"log_coeff_theta", Json::number(s.log_coeff[0])},
                   {"log_coeff_fiber", Json::number(s.log_coeff[1])},
                   {"condition", Json::number(s.condition)},
                   {"fit_rms_theta", Json::number(s.fit_rms[0])},
                   {"fit_rms_fiber", Json::number(s.fit_rms[1])},
                   {"divergence_zero", Json::boolean(s.divergence_zero)}};
    return res;
}

KindResult run_falloff(const Params& p) {
    const int n = p.integer("n");
    const int k = p.integer("k");
    const double m = p.num("m");

    fg::FalloffConfig cfg;
    cfg.rho_lo = p.num("rho_lo", cfg.rho_lo);
    cfg.rho_hi = p.num("rho_hi", cfg.rho_hi);
    cfg.samples = p.integer("samples", cfg.samples);

    // the rho window reaches r ~ 1/rho_lo; size the chart accordingly
    const double r_max = p.num("r_max", 2.5 / cfg.rho_lo);
    const CohomOneMetric g = bh::build_metric(n, k, m, r_max);
    const fg::GeodesicChart chart(g, chart_reference(g, cfg.rho_hi));
    const fg::FalloffFit fit = fg::curvature_falloff_exponent(g, chart, cfg);

    KindResult res;
    res.summary = {{"exactly_hyperbolic", Json::boolean(fit.exactly_hyperbolic)},
                   {"slope", fit.exactly_hyperbolic ? Json::null() : Json::number(fit.slope)},
                   {"dev_at_rho_lo", Json::number(fit.dev_at_lo)},
                   {"dev_at_rho_hi", Json::number(fit.dev_at_hi)}};
    return res;
}

KindResult run_glue_decay(const Params& p) {
    const int n = p.integer("n");
    const double beta = p.num("beta");
    const double w = p.num("w", 1.0);
    const std::vector<double> Rs = p.list("R");
    if (Rs.empty()) throw ConfigError("R list must not be empty");

    KindResult res;
    if (Rs.size() == 1) {
        const glue::GluedMetric gm = glue::glue(glue::make_glue_config(n, beta, Rs[0], w));
        std::vector<Row> rows;
        for (const auto& row : gm.profile)
            rows.push_back({{"R", Json::number(Rs[0])},
                            {"x", Json::number(row[0])},
                            {"f", Json::number(row[1])},
                            {"h", Json::number(row[2])},
                            {"residual", Json::number(row[3])}});
        res.tables.emplace_back("profile", std::move(rows));
        res.summary = {{"slope", Json::null()},
                       {"residual_sup", Json::number(gm.residual_sup_collar)},
                       {"residual_sup_outside", Json::number(gm.residual_sup_outside)},
                       {"alpha", Json::number(gm.config.alpha)}};
        return res;
    }
    if (Rs.size() < 4) throw ConfigError("glue-decay needs 1 or >= 4 glue radii");

    std::vector<Row> profile_rows;
    std::vector<Row> residual_rows;
    double sup_outside = 0.0;
    std::vector<double> xs, ys;
    for (double R : Rs) {
        const glue::GluedMetric gm = glue::glue(glue::make_glue_config(n, beta, R, w));
        for (const auto& row : gm.profile)
            profile_rows.push_back({{"R", Json::number(R)},
                                    {"x", Json::number(row[0])},
                                    {"f", Json::number(row[1])},
                                    {"h", Json::number(row[2])},
                                    {"residual", Json::number(row[3])}});
        residual_rows.push_back({{"R", Json::number(R)},
                                 {"residual_sup", Json::number(gm.residual_sup_collar)}});
        sup_outside = std::max(sup_outside, gm.residual_sup_outside);
        xs.push_back(R);
        ys.push_back(std::log(gm.residual_sup_collar));
    }
    const double slope = fit_line(xs, ys).slope;
    res.tables.emplace_back("profile", std::move(profile_rows));
    res.tables.emplace_back("residuals", std::move(residual_rows));
    res.summary = {{"slope", Json::number(slope)},
                   {"residual_sup_outside", Json::number(sup_outside)}};
    return res;
}

KindResult run_cusp_rates(const Params& p) {
    const int n = p.integer("n");
    const double beta = p.num("beta", 1.0);
    const double s_min = p.num("s_min", -6.0);
    if (!(s_min <= -5.0)) throw ConfigError("cusp-rates needs s_min <= -5");

    const glue::ExtremalMetric em(n, beta, s_min, 3.0);
    const glue::AsymptoticFit af = glue::v_asymptotic_fit(em);
    const double conv = glue::curvature_convergence_rate(em);

    KindResult res;
    res.summary = {{"v_rate", Json::number(af.rate)},
                   {"v_amplitude", Json::number(af.amplitude)},
                   {"curvature_rate", Json::number(conv)}};
    return res;
}

KindResult dispatch(const Scenario& s, std::map<std::string, std::string>* resolved = nullptr) {
    const Params p(s);
    KindResult r;
    if (s.kind == "verify") r = run_verify(p);
    else if (s.kind == "bh-fold") r = run_fold(p);
    else if (s.kind == "bh-preimages") r = run_preimages(p);
    else if (s.kind == "fg-extract") r = run_fg_extract(p);
    else if (s.kind == "falloff") r = run_falloff(p);
    else if (s.kind == "glue-decay") r = run_glue_decay(p);
    else if (s.kind == "cusp-rates") r = run_cusp_rates(p);
    else throw ConfigError("unknown scenario kind '" + s.kind + "'");
    if (resolved) *resolved = p.resolved();
    return r;
}

std::string render_json(const Scenario& s, const KindResult& r) {
    Json root = Json::object();
    root.set("config", config_json(s));
    root.set("config_hash", Json::string(hash_hex(fnv1a64(canonical_config(s)))));
    Json summary = Json::object();
    for (const auto& [k, v] : r.summary) summary.set(k, v);
    root.set("summary", summary);
    for (const auto& [name, rows] : r.tables) {
        Json arr = Json::array();
        for (const auto& row : rows) arr.push(row_to_json(row));
        root.set(name, arr);
    }
    return root.dump();
}

std::string render_csv(const Scenario& s, const KindResult& r) {
    std::string out = csv_preamble(s);
    // summary as namespaced comment lines keeps the tabular block purely
    // rowwise and the config preamble machine-recoverable
    for (const auto& [k, v] : r.summary) out += "# summary." + k + "=" + json_scalar_to_csv(v) + "\n";
    const std::vector<Row>* rows = nullptr;
    for (const auto& [name, block] : r.tables) {
        (void)name;
        if (!block.empty()) {
            rows = &block;
            break;
        }
    }
    if (!rows) {
        out += "empty\n";
        return out;
    }
    for (size_t i = 0; i < rows->front().size(); ++i)
        out += (i ? "," : "") + rows->front()[i].first;
    out += "\n";
    for (const auto& row : *rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + json_scalar_to_csv(row[i].second);
        out += "\n";
    }
    return out;
}

} // namespace

const std::vector<std::string>& known_kinds() {
    static const std::vector<std::string> kinds = {
        "verify", "bh-fold", "bh-preimages", "fg-extract", "falloff", "glue-decay", "cusp-rates"};
    return kinds;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        long count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2)
            throw ConfigError("bad range spec '" + text + "' (want lo:hi:count)");
        for (long i = 0; i < count; ++i)
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
        return out;
    }
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("bad numeric list entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

RunOutcome run(const Scenario& s) {
    RunOutcome out;
    try {
        validate_keys(s);
        std::map<std::string, std::string> resolved;
        const KindResult r = dispatch(s, &resolved);
        Scenario echo = s;
        echo.params = resolved;
        out.exit_code = r.exit_code;
        out.diagnostics = r.note;
        out.payload = (s.format == Format::Json) ? render_json(echo, r) : render_csv(echo, r);
    } catch (const ConfigError& e) {
        out.exit_code = 2;
        out.diagnostics = e.what();
    } catch (const DomainError& e) {
        out.exit_code = 2;
        out.diagnostics = e.what();
    } catch (const NoHorizonError& e) {
        out.exit_code = 2;
        out.diagnostics = e.what();
    } catch (const BelowExtremalError& e) {
        out.exit_code = 2;
        out.diagnostics = e.what();
    } catch (const Error& e) {
        out.exit_code = 3;
        out.diagnostics = e.what();
    }
    return out;
}

RunOutcome sweep(const Scenario& templ, const std::string& axis,
                 const std::vector<double>& values, int workers) {
    RunOutcome out;
    try {
        validate_keys(templ);
        const auto& allowed = kind_keys().at(templ.kind);
        if (!allowed.count(axis)) throw ConfigError("axis '" + axis + "' is not a key of '" + templ.kind + "'");
        if (values.empty()) throw ConfigError("sweep needs at least one axis value");
    } catch (const Error& e) {
        out.exit_code = 2;
        out.diagnostics = e.what();
        return out;
    }

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    struct Slot {
        KindResult result;
        std::string error;
        bool failed = false;
    };
    std::vector<Slot> slots(sorted.size());

    const int nw = std::max(1, workers);
    auto work = [&](int tid) {
        for (size_t i = static_cast<size_t>(tid); i < sorted.size(); i += static_cast<size_t>(nw)) {
            Scenario s = templ;
            s.params[axis] = format_g12(sorted[i]);
            try {
                validate_keys(s);
                slots[i].result = dispatch(s);
                if (slots[i].result.exit_code != 0) {
                    slots[i].failed = true;
                    slots[i].error = slots[i].result.note;
                }
            } catch (const Error& e) {
                slots[i].failed = true;
                slots[i].error = e.what();
            }
        }
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    // single-threaded ordered merge
    std::vector<Row> rows;
    std::vector<std::pair<double, std::string>> failures;
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (slots[i].failed) {
            failures.emplace_back(sorted[i], slots[i].error);
            continue;
        }
        Row row = {{axis, Json::number(sorted[i])}};
        for (const auto& kv : slots[i].result.summary) row.push_back(kv);
        rows.push_back(std::move(row));
    }

    Scenario echo = templ;
    echo.params.erase(axis);
    echo.params["sweep_axis"] = axis;
    std::string joined;
    for (size_t i = 0; i < sorted.size(); ++i) joined += (i ? "," : "") + format_g12(sorted[i]);
    echo.params["sweep_values"] = joined;
    KindResult merged;
    merged.tables.emplace_back("rows", rows);
    merged.summary = {{"axis", Json::string(axis)},
                      {"values", Json::integer(static_cast<long long>(sorted.size()))},
                      {"failures", Json::integer(static_cast<long long>(failures.size()))}};
    out.payload = (templ.format == Format::Json) ? render_json(echo, merged) : render_csv(echo, merged);
    if (!failures.empty()) {
        out.exit_code = 3;
        std::string diag = "sweep failures:";
        for (const auto& [v, msg] : failures) diag += "\n  " + axis + "=" + format_g12(v) + ": " + msg;
        out.diagnostics = diag;
    }
    return out;
}

} // namespace cce::lab
