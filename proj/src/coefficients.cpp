#include "signreg/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signreg/errors.hpp"

namespace signreg {

namespace {

void check_breaks_01(const std::vector<double>& x) {
    if (x.size() < 2) throw Error("coefficient needs at least two breakpoints");
    if (x.front() != 0.0 || x.back() != 1.0)
        throw Error("coefficient breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) throw Error("coefficient breakpoints must be strictly increasing");
}

}  // namespace

ScalarCoefficient ScalarCoefficient::constant(double v) {
    ScalarCoefficient c;
    c.kind_ = CoeffKind::Constant;
    c.pp_ = PiecewisePoly({0.0, 1.0}, {Poly::constant(v)});
    return c;
}

ScalarCoefficient ScalarCoefficient::sampled(std::vector<double> x, std::vector<double> v) {
    if (x.size() != v.size()) throw Error("sampled coefficient: point/value count mismatch");
    check_breaks_01(x);
    ScalarCoefficient c;
    c.kind_ = CoeffKind::Sampled;
    std::vector<Poly> pieces;
    pieces.reserve(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double slope = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
        pieces.push_back(Poly({v[i], slope}));
    }
    c.pp_ = PiecewisePoly(x, std::move(pieces));
    c.sample_x_ = std::move(x);
    c.sample_v_ = std::move(v);
    return c;
}

ScalarCoefficient ScalarCoefficient::piecewise(PiecewisePoly pp) {
    check_breaks_01(pp.breaks());
    ScalarCoefficient c;
    c.kind_ = CoeffKind::PiecewisePolynomial;
    c.pp_ = std::move(pp);
    return c;
}

double ScalarCoefficient::eval(double x) const { return pp_.eval(x); }

double ScalarCoefficient::eval_derivative(double x, Side side) const {
    return pp_.eval_derivative(x, 1, side);
}

double ScalarCoefficient::constant_value() const {
    if (kind_ != CoeffKind::Constant) throw Error("coefficient is not constant");
    return pp_.pieces().front().eval(0.0);
}

double ScalarCoefficient::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    const auto& breaks = pp_.breaks();
    const auto& pieces = pp_.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Poly& p = pieces[i];
        const double len = breaks[i + 1] - breaks[i];
        m = std::min({m, p.eval(0.0), p.eval(len)});
        if (p.degree() <= 1) continue;
        if (p.degree() <= 3) {
            // stationary points of a cubic: roots of a quadratic
            Poly d = p.derivative();
            const auto& c = d.coeffs();
            double a = c.size() > 2 ? c[2] : 0.0;
            double b = c.size() > 1 ? c[1] : 0.0;
            double c0 = c.size() > 0 ? c[0] : 0.0;
            if (a == 0.0) {
                if (b != 0.0) {
                    double t = -c0 / b;
                    if (t > 0.0 && t < len) m = std::min(m, p.eval(t));
                }
            } else {
                double disc = b * b - 4.0 * a * c0;
                if (disc >= 0.0) {
                    double sq = std::sqrt(disc);
                    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
                        if (t > 0.0 && t < len) m = std::min(m, p.eval(t));
                }
            }
        } else {
            // dense scan with a margin from the derivative bound
            const int n = 64 * (p.degree() - 2);
            double dmax = 0.0;
            Poly d = p.derivative();
            for (int k = 0; k <= n; ++k) {
                double t = len * k / n;
                m = std::min(m, p.eval(t));
                dmax = std::max(dmax, std::abs(d.eval(t)));
            }
            m -= 0.5 * dmax * len / n;
        }
    }
    return m;
}

GeneralizedCoefficient canonicalize(GeneralizedCoefficient coeff) {
    auto& atoms = coeff.atoms;
    std::stable_sort(atoms.begin(), atoms.end(), [](const AtomicTerm& a, const AtomicTerm& b) {
        if (a.location != b.location) return a.location < b.location;
        return a.order < b.order;
    });
    std::vector<AtomicTerm> merged;
    for (const AtomicTerm& a : atoms) {
        if (!merged.empty() && merged.back().location == a.location &&
            merged.back().order == a.order) {
            merged.back().weight += a.weight;
        } else {
            merged.push_back(a);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const AtomicTerm& a) { return a.weight == 0.0; }),
                 merged.end());
    coeff.atoms = std::move(merged);
    return coeff;
}

double apply_coefficient(const GeneralizedCoefficient& coeff, const PiecewisePoly& w) {
    double r = 0.0;
    for (const AtomicTerm& a : coeff.atoms) {
        Side side = a.location == w.domain_end() ? Side::Left : Side::Right;
        if (a.order == 0)
            r += a.weight * w.eval(a.location, side);
        else
            r -= a.weight * w.eval_derivative(a.location, 1, side);
    }
    if (coeff.smooth) r += coeff.smooth->as_piecewise().product(w).integral();
    if (coeff.gradient) r += coeff.gradient->as_piecewise().product(w.derivative()).integral();
    return r;
}

}  // namespace signreg
