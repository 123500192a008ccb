#include "signreg/band.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "signreg/errors.hpp"

namespace signreg {

double& SymBandMatrix::at(int i, int j) {
    if (i < j) std::swap(i, j);
    if (i - j > bw_ || i >= n_ || j < 0) throw Error("band matrix: index outside band");
    return a_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

double SymBandMatrix::entry(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i >= n_ || j < 0) throw Error("band matrix: index outside matrix");
    if (i - j > bw_) return 0.0;
    return a_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

std::vector<double> SymBandMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int j = std::max(0, i - bw_); j <= i; ++j) {
            double v = a_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
            y[i] += v * x[j];
            if (j != i) y[j] += v * x[i];
        }
    }
    return y;
}

double SymBandMatrix::max_diag() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(entry(i, i)));
    return m;
}

double SymBandMatrix::inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j)
            row += std::abs(entry(i, j));
        m = std::max(m, row);
    }
    return m;
}

void SymBandMatrix::dump_triplets(std::ostream& os) const {
    char buf[64];
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - bw_); j <= i; ++j) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, entry(i, j));
            os << buf;
        }
}

BandLDLT::BandLDLT(const SymBandMatrix& m, double pivot_tol_rel) {
    n_ = m.size();
    bw_ = m.bandwidth();
    l_.assign(static_cast<std::size_t>(n_) * (bw_ + 1), 0.0);
    d_.assign(n_, 0.0);
    pivot_tol_ = pivot_tol_rel;
    min_pivot_ = std::numeric_limits<double>::infinity();
    positive_definite_ = true;

    auto L = [this](int i, int j) -> double& {
        return l_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
    };

    for (int j = 0; j < n_; ++j) {
        double dj = m.entry(j, j);
        for (int k = std::max(0, j - bw_); k < j; ++k) dj -= L(j, k) * L(j, k) * d_[k];
        d_[j] = dj;
        min_pivot_ = std::min(min_pivot_, dj);
        // relative to the column's own diagonal: the beam diagonal grows like
        // 1/len^3, so a global scale would flag fine meshes spuriously
        if (!(dj > pivot_tol_rel * std::abs(m.entry(j, j)))) {
            positive_definite_ = false;
            return;  // factorization unusable past a non-positive pivot
        }
        for (int i = j + 1; i <= std::min(n_ - 1, j + bw_); ++i) {
            double v = m.entry(i, j);
            for (int k = std::max({0, i - bw_, j - bw_}); k < j; ++k)
                v -= L(i, k) * L(j, k) * d_[k];
            L(i, j) = v / dj;
        }
        L(j, j) = 1.0;
    }
}

std::vector<double> BandLDLT::solve(const std::vector<double>& rhs) const {
    if (!positive_definite_)
        throw NotPositiveDefinite("solve on a non-positive-definite factorization");
    auto L = [this](int i, int j) {
        return l_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
    };
    std::vector<double> x(rhs);
    for (int i = 0; i < n_; ++i)
        for (int k = std::max(0, i - bw_); k < i; ++k) x[i] -= L(i, k) * x[k];
    for (int i = 0; i < n_; ++i) x[i] /= d_[i];
    for (int i = n_ - 1; i >= 0; --i)
        for (int k = i + 1; k <= std::min(n_ - 1, i + bw_); ++k) x[i] -= L(k, i) * x[k];
    return x;
}

}  // namespace signreg
