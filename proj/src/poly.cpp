#include "signreg/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "signreg/errors.hpp"

namespace signreg {

double Poly::eval(double t) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly::constant(0.0);
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Poly(std::move(a));
}

Poly Poly::shifted(double d) const {
    // binomial re-expansion: out[j] = sum_k c_k C(k,j) d^(k-j)
    std::vector<double> out(c_.size(), 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        double term = c_[k];  // c_k * C(k,j) * d^(k-j), starting at j = k
        out[k] += term;
        for (std::size_t j = k; j-- > 0;) {
            term *= d * static_cast<double>(j + 1) / static_cast<double>(k - j);
            out[j] += term;
        }
    }
    return Poly(std::move(out));
}

Poly Poly::operator*(const Poly& rhs) const {
    if (c_.empty() || rhs.c_.empty()) return Poly::constant(0.0);
    std::vector<double> out(c_.size() + rhs.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < rhs.c_.size(); ++j) out[i + j] += c_[i] * rhs.c_[j];
    return Poly(std::move(out));
}

Poly Poly::operator+(const Poly& rhs) const {
    std::vector<double> out(std::max(c_.size(), rhs.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) out[i] += rhs.c_[i];
    return Poly(std::move(out));
}

Poly Poly::scaled(double a) const {
    std::vector<double> out(c_);
    for (double& v : out) v *= a;
    return Poly(std::move(out));
}

void Poly::trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (breaks_.size() != pieces_.size() + 1 || pieces_.empty())
        throw Error("piecewise polynomial: breakpoint/piece count mismatch");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw Error("piecewise polynomial: breakpoints not strictly increasing");
}

int PiecewisePoly::piece_of(double x, Side side) const {
    const double a = breaks_.front(), b = breaks_.back();
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    if (x < a - tol || x > b + tol) throw OutOfDomain("point outside piecewise domain");
    x = std::clamp(x, a, b);
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    int i = static_cast<int>(it - breaks_.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(pieces_.size()) - 1);
    // exact hit on an interior breakpoint: side selects the piece
    if (side == Side::Left && i > 0 && x == breaks_[i]) --i;
    return i;
}

double PiecewisePoly::eval(double x, Side side) const {
    int i = piece_of(x, side);
    return pieces_[i].eval(x - breaks_[i]);
}

double PiecewisePoly::eval_derivative(double x, int order, Side side) const {
    int i = piece_of(x, side);
    Poly p = pieces_[i];
    for (int k = 0; k < order; ++k) p = p.derivative();
    return p.eval(x - breaks_[i]);
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<Poly> out;
    out.reserve(pieces_.size());
    for (const Poly& p : pieces_) out.push_back(p.derivative());
    return PiecewisePoly(breaks_, std::move(out));
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    std::vector<Poly> out;
    out.reserve(pieces_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        Poly a = pieces_[i].antiderivative();
        std::vector<double> c = a.coeffs();
        if (c.empty()) c.push_back(0.0);
        c[0] += acc;
        out.emplace_back(std::move(c));
        acc = out.back().eval(breaks_[i + 1] - breaks_[i]);
    }
    return PiecewisePoly(breaks_, std::move(out));
}

double PiecewisePoly::integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        acc += pieces_[i].antiderivative().eval(breaks_[i + 1] - breaks_[i]);
    return acc;
}

double PiecewisePoly::integral(double a, double b) const {
    if (a == b) return 0.0;
    if (a > b) return -integral(b, a);
    PiecewisePoly F = antiderivative();
    return F.eval(b, Side::Left) - F.eval(a, Side::Right);
}

PiecewisePoly PiecewisePoly::product(const PiecewisePoly& rhs) const {
    // merged breakpoints over the common domain
    std::vector<double> merged;
    merged.reserve(breaks_.size() + rhs.breaks_.size());
    const double lo = std::max(domain_start(), rhs.domain_start());
    const double hi = std::min(domain_end(), rhs.domain_end());
    if (!(lo < hi)) throw Error("piecewise product: domains do not overlap");
    for (double x : breaks_)
        if (x >= lo && x <= hi) merged.push_back(x);
    for (double x : rhs.breaks_)
        if (x >= lo && x <= hi) merged.push_back(x);
    merged.push_back(lo);
    merged.push_back(hi);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
                 merged.end());

    std::vector<Poly> out;
    out.reserve(merged.size() - 1);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double mid = 0.5 * (merged[i] + merged[i + 1]);
        int il = piece_of(mid);
        int ir = rhs.piece_of(mid);
        // re-express both factors in the local variable x - merged[i]
        Poly a = pieces_[il].shifted(merged[i] - breaks_[il]);
        Poly b = rhs.pieces_[ir].shifted(merged[i] - rhs.breaks_[ir]);
        out.push_back(a * b);
    }
    return PiecewisePoly(std::move(merged), std::move(out));
}

PiecewisePoly PiecewisePoly::sum(const PiecewisePoly& rhs) const {
    std::vector<double> merged;
    merged.reserve(breaks_.size() + rhs.breaks_.size());
    merged.insert(merged.end(), breaks_.begin(), breaks_.end());
    merged.insert(merged.end(), rhs.breaks_.begin(), rhs.breaks_.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
                 merged.end());

    std::vector<Poly> out;
    out.reserve(merged.size() - 1);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double mid = 0.5 * (merged[i] + merged[i + 1]);
        int il = piece_of(mid);
        int ir = rhs.piece_of(mid);
        Poly a = pieces_[il].shifted(merged[i] - breaks_[il]);
        Poly b = rhs.pieces_[ir].shifted(merged[i] - rhs.breaks_[ir]);
        out.push_back(a + b);
    }
    return PiecewisePoly(std::move(merged), std::move(out));
}

PiecewisePoly PiecewisePoly::scaled(double a) const {
    std::vector<Poly> out;
    out.reserve(pieces_.size());
    for (const Poly& p : pieces_) out.push_back(p.scaled(a));
    return PiecewisePoly(breaks_, std::move(out));
}

int PiecewisePoly::max_degree() const {
    int d = 0;
    for (const Poly& p : pieces_) d = std::max(d, p.degree());
    return d;
}

namespace {

double legendre(int n, double x, double* dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { *dp = 0.0; return 1.0; }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    *dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

GaussRule compute_gauss(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton refinement
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double dp = 0.0;
            double p = legendre(n, x, &dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double dp = 0.0;
        legendre(n, x, &dp);
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int npoints) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(npoints);
    if (it == cache.end()) it = cache.emplace(npoints, compute_gauss(npoints)).first;
    return it->second;
}

int gauss_points_for_degree(int degree) {
    int n = (degree + 2) / 2;  // n-point rule is exact through degree 2n-1
    return std::max(4, n);
}

double monotone_inverse(const PiecewisePoly& f, double value) {
    double lo = f.domain_start(), hi = f.domain_end();
    if (value <= f.eval(lo)) return lo;
    if (value >= f.eval(hi, Side::Left)) return hi;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (f.eval(mid) < value)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace signreg
