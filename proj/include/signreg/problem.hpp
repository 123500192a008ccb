#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signreg/coefficients.hpp"

namespace signreg {

/// Boundary form a*y(e) + b*y'(e) at endpoint e in {0, 1}; its kernel defines
/// an essential constraint on the trial space.
struct BoundaryFunctional {
    int endpoint = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Up to two independent functionals per endpoint.
struct SubspaceSpec {
    std::vector<BoundaryFunctional> functionals;

    static SubspaceSpec unconstrained() { return {}; }
    static SubspaceSpec clamped(int endpoint);
    static SubspaceSpec clamped_left() { return clamped(0); }
    std::vector<BoundaryFunctional> at(int endpoint) const;
};

/// Fourth-order operator data: <Ly,z> = int p y'' z'' dx + <q, y'z'> + <h, yz>
/// on the subspace cut out by the boundary functionals.
struct Problem {
    ScalarCoefficient p = ScalarCoefficient::constant(1.0);
    GeneralizedCoefficient q;
    GeneralizedCoefficient h;
    SubspaceSpec subspace;
    double p_margin = 0.0;  // recorded by validation
};

/// Second-order companion form <Sy,z> = int p y'z' dx + <q, yz> on all of
/// W_2^1 (no essential constraints); q admits order-0 atoms only.
struct SecondOrderProblem {
    ScalarCoefficient p = ScalarCoefficient::constant(1.0);
    GeneralizedCoefficient q;
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
    Problem canonical;
};

/// Checks every invariant and returns the canonical form; does not throw.
ValidationReport validate_problem(const Problem& problem);

/// Canonical form or a typed error for the first failed invariant.
Problem validated(const Problem& problem);

/// The second-order form sharing p and q with the given fourth-order problem.
SecondOrderProblem second_order_of(const Problem& problem);

/// FNV-1a over the canonical serialization; stable across runs.
std::uint64_t problem_hash(const Problem& problem);

}  // namespace signreg
