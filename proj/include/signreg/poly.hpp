#pragma once

#include <span>
#include <vector>

namespace signreg {

enum class Side { Left, Right };

/// Dense univariate polynomial, coefficients low-to-high in a local variable.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(double v) { return Poly({v}); }

    double eval(double t) const;
    Poly derivative() const;
    Poly antiderivative() const;  // constant term zero
    Poly shifted(double d) const; // returns s with s(t) = (*this)(t + d)

    Poly operator*(const Poly& rhs) const;
    Poly operator+(const Poly& rhs) const;
    Poly scaled(double a) const;

    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }

private:
    void trim();
    std::vector<double> c_;
};

/// Piecewise polynomial on [breaks.front(), breaks.back()];
/// piece i lives on [breaks[i], breaks[i+1]] in the local variable x - breaks[i].
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces);

    double eval(double x, Side side = Side::Right) const;
    double eval_derivative(double x, int order, Side side = Side::Right) const;

    PiecewisePoly derivative() const;
    PiecewisePoly antiderivative() const;  // continuous, vanishes at left end
    double integral() const;
    double integral(double a, double b) const;

    PiecewisePoly product(const PiecewisePoly& rhs) const;  // on merged breakpoints
    PiecewisePoly sum(const PiecewisePoly& rhs) const;
    PiecewisePoly scaled(double a) const;

    int piece_of(double x, Side side = Side::Right) const;
    int max_degree() const;
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    double domain_start() const { return breaks_.front(); }
    double domain_end() const { return breaks_.back(); }

private:
    std::vector<double> breaks_;
    std::vector<Poly> pieces_;
};

/// Gauss-Legendre rule on [-1, 1]; nodes computed once per point count.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int npoints);

/// Smallest rule exact for polynomials of the given degree, at least 4 points.
int gauss_points_for_degree(int degree);

/// Inverse of a strictly increasing piecewise polynomial by bisection,
/// resolved to 1e-13 in the argument.
double monotone_inverse(const PiecewisePoly& f, double value);

}  // namespace signreg
