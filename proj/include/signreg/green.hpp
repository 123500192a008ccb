#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "signreg/assembly.hpp"

namespace signreg {

/// Samples of the Green function G(t, s) on a grid pair; row i, column j is
/// G(t_grid[i], s_grid[j]).
struct GreenKernel {
    std::vector<double> t_grid;
    std::vector<double> s_grid;
    std::vector<std::vector<double>> values;
    int mesh_elements = 0;
    std::uint64_t problem_hash = 0;

    double max_abs() const;
    double value(int i, int j) const { return values[i][j]; }
};

enum class KernelClass { InteriorPositive, ClosedUniformPositive, SignChanging, Inconclusive };
std::string to_string(KernelClass c);

struct PositivityReport {
    KernelClass classification = KernelClass::Inconclusive;
    double min_interior = 0.0;
    double argmin_interior_t = 0.0, argmin_interior_s = 0.0;
    double min_closed = 0.0;
    double argmin_closed_t = 0.0, argmin_closed_s = 0.0;
    double boundary_margin = 0.0;
    double positivity_tol = 0.0;
};

/// One factorization, one solve per s-column. Grid points must be mesh nodes.
GreenKernel green_matrix(const Factorization& fact, std::span<const double> t_grid,
                         std::span<const double> s_grid);

/// Minima over the sampled grid: the interior check ignores points within
/// boundary_margin of the endpoints, the closed check covers every sample.
/// positivity_tol = 1e-9 * max|G| separates evidence from roundoff.
PositivityReport positivity_report(const GreenKernel& kernel, double boundary_margin = 1.0 / 64);

/// Sub-kernel on [eps, 1-eps] x [eps, 1-eps]; values copied verbatim.
GreenKernel restrict_kernel(const GreenKernel& kernel, double eps);

/// CSV: first row the s-grid, first column the t-grid, 17 significant digits.
void write_kernel_csv(const GreenKernel& kernel, std::ostream& os);

}  // namespace signreg
