// Test-side oracles, kept independent of the library's numerical paths:
// closed forms, a finite-difference solver, dense elimination, and plain
// quadrature helpers.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#ifdef SIGNREG_HAVE_EIGEN
#include <Eigen/Dense>
#endif

namespace oracles {

// Green function of y'''' = f, y(0) = y'(0) = 0, y''(1) = y'''(1) = 0:
// G(t, s) = t^2 (3s - t) / 6 for t <= s, symmetric.
inline double cantilever_green(double t, double s) {
    if (t > s) std::swap(t, s);
    return t * t * (3.0 * s - t) / 6.0;
}

// Solution of the same problem for f = 1: y(t) = t^2 (t^2 - 4t + 6) / 24.
inline double cantilever_uniform(double t) {
    return t * t * (t * t - 4.0 * t + 6.0) / 24.0;
}

// Sturm weight oracle for p = 1, q = 1: sigma = cosh(x - 1/2) / (2 sinh 1/2),
// omega = 1/2, tau(x) = (sinh(x - 1/2) + sinh(1/2)) / (2 sinh 1/2).
inline double cosh_sigma(double x) { return std::cosh(x - 0.5) / (2.0 * std::sinh(0.5)); }
inline double cosh_tau(double x) {
    return (std::sinh(x - 0.5) + std::sinh(0.5)) / (2.0 * std::sinh(0.5));
}

// Composite Simpson rule; exact for cubics on each panel.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + i * h, x2 = x0 + h, x1 = 0.5 * (x0 + x2);
        acc += (h / 6.0) * (f(x0) + 4.0 * f(x1) + f(x2));
    }
    return acc;
}

// Five-point Gauss-Legendre rule (tabulated nodes): exact through degree 9,
// never evaluates at the interval endpoints.
inline double gauss5(const std::function<double(double)>& f, double a, double b) {
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += ws[i] * f(mid + half * xs[i]);
    return acc * half;
}

// Dense Gaussian elimination with partial pivoting (row-major storage).
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (std::abs(a[i * n + c]) > std::abs(a[p * n + c])) p = i;
        if (a[p * n + c] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[p * n + j]);
        std::swap(b[c], b[p]);
        for (int i = c + 1; i < n; ++i) {
            double f = a[i * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
            b[i] -= f * b[c];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= a[i * n + j] * b[j];
        b[i] /= a[i * n + i];
    }
    return b;
}

// Finite-difference solution of y'''' + c y = delta_s with y(0) = y'(0) = 0
// and y''(1) = y'''(1) = 0 on a uniform grid of N intervals. Second-order
// one-sided closures at the ends; returns nodal values y_0..y_N.
inline std::vector<double> fd_foundation_column(double c, int N, double s) {
    const double h = 1.0 / N;
    const int n = N + 1;
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> b(n, 0.0);
    auto A = [&](int i, int j) -> double& { return a[i * static_cast<std::size_t>(n) + j]; };

    A(0, 0) = 1.0;
    A(1, 0) = -3.0 / (2.0 * h);
    A(1, 1) = 4.0 / (2.0 * h);
    A(1, 2) = -1.0 / (2.0 * h);
    const double ih4 = 1.0 / (h * h * h * h);
    for (int i = 2; i <= N - 2; ++i) {
        A(i, i - 2) = ih4;
        A(i, i - 1) = -4.0 * ih4;
        A(i, i) = 6.0 * ih4 + c;
        A(i, i + 1) = -4.0 * ih4;
        A(i, i + 2) = ih4;
    }
    const double ih2 = 1.0 / (h * h), ih3 = 1.0 / (h * h * h);
    A(N - 1, N) = 2.0 * ih2;
    A(N - 1, N - 1) = -5.0 * ih2;
    A(N - 1, N - 2) = 4.0 * ih2;
    A(N - 1, N - 3) = -1.0 * ih2;
    A(N, N) = 2.5 * ih3;
    A(N, N - 1) = -9.0 * ih3;
    A(N, N - 2) = 12.0 * ih3;
    A(N, N - 3) = -7.0 * ih3;
    A(N, N - 4) = 1.5 * ih3;

    int is = static_cast<int>(std::lround(s * N));
    b[is] = 1.0 / h;  // discrete delta
    return dense_solve(std::move(a), std::move(b));
}

#ifdef SIGNREG_HAVE_EIGEN
// Smallest eigenvalue of a dense symmetric matrix given by an entry accessor.
inline double smallest_eigenvalue(int n, const std::function<double(int, int)>& entry) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entry(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvalues()(0);
}

inline bool cholesky_succeeds(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m[i][j];
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    return llt.info() == Eigen::Success;
}
#endif

}  // namespace oracles
