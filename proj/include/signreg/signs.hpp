#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "signreg/assembly.hpp"

namespace signreg {

/// Continuous piecewise-linear function given by samples on [0, 1].
struct SampledFunction {
    std::vector<double> points;
    std::vector<double> values;

    double eval(double x) const;
    double max_abs() const;
    ScalarCoefficient to_coefficient() const;  // exact piecewise-linear form
};

/// S^- count: values within zero_tol of zero are discarded, strict sign
/// alternations of the remainder are counted. all_zero flags an undefined
/// count (every sample discarded).
struct SignCount {
    int changes = 0;
    bool all_zero = false;
    std::vector<std::pair<double, double>> alternations;  // bracketing sample points
};

SignCount sign_changes(std::span<const double> points, std::span<const double> values,
                       double zero_tol);
SignCount sign_changes(const SampledFunction& f, double zero_tol);

/// The default tolerance separating exact zeros from sign information.
double default_zero_tol(std::span<const double> values);

/// Piecewise-linear function with exactly n sign changes at uniformly drawn
/// interior points, unit sup norm; deterministic in the seed.
SampledFunction random_sign_pattern(int n, std::uint64_t seed);

/// Verdict of the Proposition-1 inequality S^-(y) <= S^-(f) for y = L^{-1} f.
struct NondecreaseReport {
    int n_f = 0;
    int n_y = 0;
    bool pass = true;
    bool y_all_zero = false;
    std::vector<std::pair<double, double>> y_alternations;
    std::vector<std::pair<double, double>> f_alternations;
    double zero_tol_y = 0.0;
    double zero_tol_f = 0.0;
};

NondecreaseReport verify_nondecrease(const Factorization& fact, const SampledFunction& f,
                                     std::span<const double> eval_grid);

/// Node-plus-midpoint evaluation grid for a mesh.
std::vector<double> default_eval_grid(const Mesh& mesh);

}  // namespace signreg
