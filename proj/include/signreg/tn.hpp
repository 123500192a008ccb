#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "signreg/green.hpp"

namespace signreg {

/// Strictly increasing row/column index selections of equal length.
struct MinorSelection {
    std::vector<int> rows;
    std::vector<int> cols;
};

struct MinorValue {
    double value = 0.0;
    double condition_estimate = 1.0;  // pivot ratio of the LU factorization
};

/// Determinant of the selected kernel submatrix by partially pivoted LU.
MinorValue compound_minor(const GreenKernel& kernel, const MinorSelection& sel);

struct MinorViolation {
    std::vector<int> rows;
    std::vector<int> cols;
    double value = 0.0;
};

struct TNOrderStats {
    double min_minor = 0.0;
    MinorSelection argmin;
    double min_diagonal = 0.0;  // NaN when the grids differ in size
    long long checked = 0;
    std::vector<MinorViolation> violations;
};

struct TNReport {
    int max_order = 0;
    std::map<int, TNOrderStats> orders;
    bool exhaustive = true;
    std::uint64_t sample_seed = 0;
    long long sample_count = 0;
    double tol_rel = 1e-9;
    bool any_violation() const;
};

/// Checks every minor of each order up to max_order against >= -tol, and the
/// diagonal minors against > 0, where tol scales with the product of row
/// maxima of the submatrix. Exhaustive while C(n, order) stays within the
/// C(14, 4) budget per side, seeded random sampling beyond that.
TNReport tn_report(const GreenKernel& kernel, int max_order, double tol_rel = 1e-9,
                   std::uint64_t sample_seed = 1, long long sample_count = 20000);

}  // namespace signreg
