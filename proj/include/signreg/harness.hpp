#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "signreg/config.hpp"
#include "signreg/problem.hpp"

namespace signreg {

inline constexpr const char* kToolVersion = "signreg 0.1.0";

/// Exit codes: 0 all checks pass, 2 checks ran with violations, 1 error.
struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = 0;
    std::map<std::string, std::string> artifacts;  // filename -> content
};

nlohmann::ordered_json problem_echo_json(const Problem& problem);

/// validate + factorize + positivity classification
RunResult run_check(const Problem& problem, const RunConfig& cfg);
/// Green kernel on an equispaced grid; emits kernel.csv
RunResult run_green(const Problem& problem, const RunConfig& cfg);
/// single-load verdict for f = random_sign_pattern(n, seed)
RunResult run_signs(const Problem& problem, const RunConfig& cfg, int n);
/// randomized Proposition-1 suite across n = 0..nmax and the seed block
RunResult run_suite(const Problem& problem, const RunConfig& cfg);
/// interlacing certificate for one random load
RunResult run_certificate(const Problem& problem, const RunConfig& cfg, int n);
/// conjugation transform with a dyadic-refinement residual study
RunResult run_transform(const Problem& problem, const RunConfig& cfg, const std::string& mode);
/// compound-minor report
RunResult run_tn(const Problem& problem, const RunConfig& cfg);
/// restricted-kernel positivity
RunResult run_restrict(const Problem& problem, const RunConfig& cfg);
/// pointwise Green-value refinement study
RunResult run_refine(const Problem& problem, const RunConfig& cfg, double t, double s);
/// strong-form residuals declared in the config (or the built-in three-point
/// set when none are declared)
RunResult run_residuals(const Problem& problem, const RunConfig& cfg);

/// Equispaced interior grid i/(n+1), optionally extended by the endpoints.
std::vector<double> make_grid(int n, bool include_boundary);

}  // namespace signreg
