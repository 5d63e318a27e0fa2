#include <doctest.h>

#include <string>

#include "cce/jsonout.hpp"
#include "cce/scenario.hpp"

using namespace cce::lab;

namespace {

Scenario make(const std::string& kind, std::map<std::string, std::string> params,
              Format fmt = Format::Json) {
    Scenario s;
    s.kind = kind;
    s.params = std::move(params);
    s.format = fmt;
    return s;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("12-digit float formatting") {
    CHECK(format_g12(2.0 * M_PI / std::sqrt(3.0)) == "3.62759872847");
    CHECK(format_g12(0.1) == "0.1");
    CHECK(format_g12(-1.0 / 3.0) == "-0.333333333333");
}

TEST_CASE("bh-fold scenario reports both fold values") {
    const RunOutcome out = run(make("bh-fold", {{"n", "3"}}));
    CHECK(out.exit_code == 0);
    CHECK(contains(out.payload, "\"beta0\":3.62759872847"));
    CHECK(contains(out.payload, "\"beta0_closed_form\":3.62759872847"));
    CHECK(contains(out.payload, "\"matches_closed_form\":true"));
    CHECK(contains(out.payload, "\"config_hash\""));
}

TEST_CASE("verify scenario: csv shape and tolerance exit code") {
    const RunOutcome csv = run(make("verify", {{"n", "3"}, {"k", "1"}, {"m", "1"}}, Format::Csv));
    CHECK(csv.exit_code == 0);
    CHECK(contains(csv.payload, "# kind=verify"));
    CHECK(contains(csv.payload, "r,einstein_residual\n"));
    int rows = 0;
    for (size_t pos = 0; (pos = csv.payload.find('\n', pos)) != std::string::npos; ++pos) ++rows;
    CHECK(rows >= 20);

    const RunOutcome strict =
        run(make("verify", {{"n", "3"}, {"k", "1"}, {"m", "1"}, {"tol", "1e-30"}}));
    CHECK(strict.exit_code == 3);
}

TEST_CASE("validation failures exit 2") {
    CHECK(run(make("verify", {{"n", "3"}, {"k", "1"}, {"m", "1"}, {"bogus", "7"}})).exit_code == 2);
    CHECK(run(make("no-such-kind", {})).exit_code == 2);
    CHECK(run(make("verify", {{"n", "3"}, {"k", "1"}, {"m", "abc"}})).exit_code == 2);
    CHECK(run(make("verify", {{"n", "3.5"}, {"k", "1"}, {"m", "1"}})).exit_code == 2);
    // out-of-range family parameters are validation failures too
    CHECK(run(make("verify", {{"n", "3"}, {"k", "-1"}, {"m", "-1"}})).exit_code == 2);
    // horizonless charts (hyperbolic space) are still valid verify targets
    CHECK(run(make("verify", {{"n", "3"}, {"k", "1"}, {"m", "0"}})).exit_code == 0);
}

TEST_CASE("preimage scenario counts the fold branches") {
    const RunOutcome two = run(make("bh-preimages", {{"n", "3"}, {"k", "1"}, {"beta", "3.0"}}));
    CHECK(two.exit_code == 0);
    CHECK(contains(two.payload, "\"count\":2"));
    const RunOutcome none = run(make("bh-preimages", {{"n", "3"}, {"k", "1"}, {"beta", "3.8"}}));
    CHECK(contains(none.payload, "\"count\":0"));
    CHECK(contains(none.payload, "\"m1\":null"));
}

TEST_CASE("cusp-rates scenario emits the three fitted exponents") {
    const RunOutcome out = run(make("cusp-rates", {{"n", "3"}}));
    CHECK(out.exit_code == 0);
    CHECK(contains(out.payload, "\"v_rate\":3.46"));
    CHECK(contains(out.payload, "\"v_amplitude\":2.9"));
    CHECK(contains(out.payload, "\"curvature_rate\":1.7"));
}

TEST_CASE("sweep: deterministic across worker counts") {
    const Scenario templ = make("verify", {{"n", "3"}, {"k", "1"}}, Format::Csv);
    const std::vector<double> values = {0.5, 0.8, 1.2, 1.7, 2.3, 3.0, 3.8, 4.7};
    const RunOutcome w1 = sweep(templ, "m", values, 1);
    const RunOutcome w8 = sweep(templ, "m", values, 8);
    CHECK(w1.exit_code == 0);
    CHECK(w1.payload == w8.payload);
    CHECK(contains(w1.payload, "m,r_plus,beta,residual_sup"));
}

TEST_CASE("sweep: beta column is strictly monotone for the k=0 family") {
    const Scenario templ = make("verify", {{"n", "3"}, {"k", "0"}});
    std::vector<double> masses;
    for (int i = 0; i < 12; ++i) masses.push_back(0.2 + 0.5 * i);
    const RunOutcome out = sweep(templ, "m", masses, 4);
    CHECK(out.exit_code == 0);
    // pull the beta values back out of the JSON rows
    std::vector<double> betas;
    size_t pos = 0;
    while ((pos = out.payload.find("\"beta\":", pos)) != std::string::npos) {
        pos += 7;
        betas.push_back(std::stod(out.payload.substr(pos)));
    }
    REQUIRE(betas.size() == masses.size());
    for (size_t i = 0; i + 1 < betas.size(); ++i) CHECK(betas[i + 1] < betas[i]);
}

TEST_CASE("sweep: preimage counts cross the fold wall") {
    const Scenario templ = make("bh-preimages", {{"n", "3"}, {"k", "1"}});
    const RunOutcome out = sweep(templ, "beta", {2.8, 3.1, 3.4, 3.7, 4.0}, 2);
    CHECK(out.exit_code == 0);
    // beta0 = 3.6276: counts 2,2,2,0,0
    size_t first = out.payload.find("\"count\":2");
    size_t last = out.payload.rfind("\"count\":0");
    CHECK(first != std::string::npos);
    CHECK(last != std::string::npos);
    CHECK(first < last);
}

TEST_CASE("sweep: partial failures reported with exit 3") {
    // m = -1 sits below the extremal mass of the k=-1 family
    const Scenario templ = make("verify", {{"n", "3"}, {"k", "-1"}});
    const RunOutcome out = sweep(templ, "m", {-1.0, 1.0}, 2);
    CHECK(out.exit_code == 3);
    CHECK(contains(out.diagnostics, "m=-1"));
    CHECK(contains(out.payload, "\"failures\":1"));
    CHECK(run(make("verify", {{"n", "3"}, {"k", "-1"}, {"m", "1"}})).exit_code == 0);
}

TEST_CASE("sweep rejects a non-key axis") {
    const Scenario templ = make("verify", {{"n", "3"}, {"k", "1"}});
    CHECK(sweep(templ, "beta", {1.0}, 1).exit_code == 2);
}

TEST_CASE("value list parsing") {
    CHECK(parse_value_list("1,2,3").size() == 3);
    const auto r = parse_value_list("2:6:5");
    REQUIRE(r.size() == 5);
    CHECK(r.front() == doctest::Approx(2.0));
    CHECK(r.back() == doctest::Approx(6.0));
    CHECK_THROWS(parse_value_list("2:6"));
    CHECK_THROWS(parse_value_list("a,b"));
}

TEST_CASE("config echo round-trips to a re-runnable scenario") {
    const Scenario s = make("fg-extract", {{"n", "3"}, {"k", "1"}, {"m", "1"}});
    const RunOutcome a = run(s);
    const RunOutcome b = run(s);
    CHECK(a.payload == b.payload); // repeated runs byte-identical
    CHECK(contains(a.payload, "\"kind\":\"fg-extract\""));
    CHECK(contains(a.payload, "\"m\":\"1\""));
    CHECK(contains(a.payload, "\"trace_gn\""));
}

TEST_CASE("glue-decay scenario: fitted slope near -sqrt(n)") {
    const RunOutcome out =
        run(make("glue-decay", {{"n", "3"}, {"beta", "1"}, {"R", "2,3,4,5"}}));
    CHECK(out.exit_code == 0);
    const size_t pos = out.payload.find("\"slope\":");
    REQUIRE(pos != std::string::npos);
    const double slope = std::stod(out.payload.substr(pos + 8));
    CHECK(slope == doctest::Approx(-std::sqrt(3.0)).epsilon(0.1));
    CHECK(contains(out.payload, "\"residual_sup_outside\""));
}

TEST_CASE("sweep over the glue radius: residual_sup decreases") {
    const Scenario templ = make("glue-decay", {{"n", "3"}, {"beta", "1"}});
    const RunOutcome out = sweep(templ, "R", {3.0, 4.0, 5.0}, 2);
    CHECK(out.exit_code == 0);
    std::vector<double> sups;
    size_t pos = 0;
    while ((pos = out.payload.find("\"residual_sup\":", pos)) != std::string::npos) {
        pos += 15;
        sups.push_back(std::stod(out.payload.substr(pos)));
    }
    REQUIRE(sups.size() == 3);
    CHECK(sups[1] < sups[0]);
    CHECK(sups[2] < sups[1]);
}

TEST_CASE("csv preamble reconstructs the scenario byte-for-byte") {
    const Scenario s = make("verify", {{"n", "3"}, {"k", "1"}, {"m", "1"}}, Format::Csv);
    const RunOutcome first = run(s);
    REQUIRE(first.exit_code == 0);

    Scenario rebuilt;
    rebuilt.format = Format::Csv;
    size_t pos = 0;
    while (pos < first.payload.size() && first.payload[pos] == '#') {
        const size_t end = first.payload.find('\n', pos);
        const std::string line = first.payload.substr(pos + 2, end - pos - 2);
        const size_t eq = line.find('=');
        if (eq != std::string::npos) {
            const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            if (key == "kind") rebuilt.kind = val;
            else if (key == "seed") rebuilt.seed = std::stoul(val);
            else if (key != "format" && key != "config_hash" && key.rfind("summary.", 0) != 0 &&
                     !val.empty())
                rebuilt.params[key] = val;
        }
        pos = end + 1;
    }
    const RunOutcome second = run(rebuilt);
    CHECK(second.payload == first.payload);
}
