#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cce::lab {

enum class Format { Csv, Json };

// A runnable laboratory scenario: kind + flat key=value parameters.
// Unknown keys are rejected; outputs embed the resolved config and its hash.
// Worker count is an execution detail and never enters the output.
struct Scenario {
    std::string kind; // verify | bh-fold | bh-preimages | fg-extract | falloff | glue-decay | cusp-rates
    std::map<std::string, std::string> params;
    Format format = Format::Json;
    unsigned long seed = 0; // provenance only; nothing numerical consumes it
};

struct RunOutcome {
    int exit_code = 0;       // 0 ok, 2 validation error, 3 numerical-tolerance failure
    std::string payload;     // the artifact file content
    std::string diagnostics; // human-readable notes for stderr
};

// Execute one scenario.
RunOutcome run(const Scenario& s);

// Parallel sweep over a numeric axis; merged output sorted by axis value and
// byte-identical for any worker count.
RunOutcome sweep(const Scenario& templ, const std::string& axis,
                 const std::vector<double>& values, int workers);

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// "1,2,3" or "lo:hi:count"
std::vector<double> parse_value_list(const std::string& text);

const std::vector<std::string>& known_kinds();

} // namespace cce::lab
