#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkz/borel.hpp"
#include "gkz/slopes.hpp"

namespace gkz::cli {

using json = nlohmann::ordered_json;

// Exit codes
constexpr int kOk = 0;
constexpr int kResidue = 1;
constexpr int kSpecError = 2;
constexpr int kObstruction = 3;

int exit_code(ErrorKind k);

struct ProblemSpec {
    IMat A;
    std::optional<IVec> w;
    GVec beta;                            // resolved, also when given as generic:<seed>
    std::optional<std::uint64_t> seed;    // set when beta was sampled
    GQ alpha;
    Truncation truncation;
    long precision = 128;
    long degree_bound = 6;                // norm bound for toric generators
    std::optional<Index> sigma;           // 0-based
    std::optional<IVec> k;
    GVec x;
};

// Parse and validate.  beta "generic:<seed>" is sampled here; seed_override
// replaces the seed written in the document.
ProblemSpec parse_spec(const json& j, std::optional<std::uint64_t> seed_override = std::nullopt);
// Canonical form, beta written out explicitly.
json spec_to_json(const ProblemSpec& s);

json series_to_json(const TruncatedSeries& f);
TruncatedSeries series_from_json(const json& j);
json exponent_to_json(const Exponent& e);

// "pi/2", "-3pi/4", "3/4*pi", "0.25"
Real parse_angle(const std::string& s);
// comma separated Gaussian rationals
GVec parse_point(const std::string& s);

json real_json(const Real& x, long bits);
json complex_json(const Complex& z, long bits);

// The whole command line: argv[0] is skipped.  JSON goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkz::cli
