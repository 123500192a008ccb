#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signreg/problem.hpp"

namespace signreg {

/// One term of a declared strong-form residual: coeff * y^(order)(point),
/// evaluated from the requested side.
struct ResidualTerm {
    double coeff = 1.0;
    int order = 0;
    double point = 0.0;
    Side side = Side::Right;
};

struct ResidualSpec {
    std::string name;
    std::vector<ResidualTerm> terms;
};

/// Harness options; config-file [options] entries are overridden by CLI flags.
struct RunConfig {
    int mesh = 64;
    int grid = 12;
    int seeds = 50;
    int nmax = 4;
    int order = 3;
    double eps = 0.25;
    int levels = 3;
    std::uint64_t seed = 1;
    double boundary_margin = 1.0 / 64;
    bool include_boundary = false;
    std::string out;
    std::vector<ResidualSpec> residuals;
};

struct ParsedConfig {
    Problem problem;
    RunConfig options;
};

/// Key-tree problem file with sections [p], [q], [h], [subspace] and the
/// optional [options] and [residuals]. Unknown keys are errors.
ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

/// Canonical echo of a problem in the config syntax.
std::string config_echo(const Problem& problem);

}  // namespace signreg
