#pragma once

#include <iosfwd>
#include <vector>

namespace signreg {

/// Symmetric band matrix, lower triangle stored row-wise:
/// entry (i, j) with 0 <= i - j <= bandwidth lives at a[i * (bw + 1) + (i - j)].
class SymBandMatrix {
public:
    SymBandMatrix() = default;
    SymBandMatrix(int n, int bandwidth)
        : n_(n), bw_(bandwidth), a_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {}

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    double& at(int i, int j);          // |i - j| <= bandwidth
    double entry(int i, int j) const;  // zero outside the band
    void add(int i, int j, double v) { at(i, j) += v; }

    std::vector<double> multiply(const std::vector<double>& x) const;
    double max_diag() const;
    double inf_norm() const;

    /// Textual triplet dump of the lower triangle: "i j value" per line,
    /// 17 significant digits.
    void dump_triplets(std::ostream& os) const;

private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<double> a_;
};

/// LDL^T factorization of a symmetric band matrix without pivoting.
/// positive_definite is false as soon as a pivot falls below pivot_tol_rel
/// times the column's own initial diagonal.
class BandLDLT {
public:
    BandLDLT() = default;
    explicit BandLDLT(const SymBandMatrix& m, double pivot_tol_rel = 1e-12);

    bool positive_definite() const { return positive_definite_; }
    double min_pivot() const { return min_pivot_; }
    double pivot_tolerance() const { return pivot_tol_; }

    /// Triangular solve; valid for positive definite factorizations only.
    std::vector<double> solve(const std::vector<double>& rhs) const;

private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<double> l_;  // unit lower band factor
    std::vector<double> d_;  // pivots
    bool positive_definite_ = false;
    double min_pivot_ = 0.0;
    double pivot_tol_ = 0.0;
};

}  // namespace signreg
