#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signreg/poly.hpp"

namespace signreg {

enum class CoeffKind { Constant, PiecewisePolynomial, Sampled };

/// Scalar coefficient on [0, 1]: a constant, a piecewise polynomial, or
/// samples with linear interpolation. Breakpoints run from 0 to 1.
class ScalarCoefficient {
public:
    static ScalarCoefficient constant(double v);
    static ScalarCoefficient sampled(std::vector<double> x, std::vector<double> v);
    static ScalarCoefficient piecewise(PiecewisePoly pp);

    CoeffKind kind() const { return kind_; }
    double eval(double x) const;
    double eval_derivative(double x, Side side = Side::Right) const;

    /// Exact conversion; sampled coefficients become piecewise-linear pieces.
    const PiecewisePoly& as_piecewise() const { return pp_; }

    /// Lower bound of the coefficient over [0, 1]. Exact for pieces of degree
    /// <= 3 (endpoint + stationary-point check), dense scan above that.
    double min_value() const;

    std::vector<double> breakpoints() const { return pp_.breaks(); }
    double constant_value() const;  // only for kind Constant

private:
    CoeffKind kind_ = CoeffKind::Constant;
    PiecewisePoly pp_;
    std::vector<double> sample_x_, sample_v_;  // retained for echo/serialization

    friend class CoefficientIO;
public:
    const std::vector<double>& sample_points() const { return sample_x_; }
    const std::vector<double>& sample_values() const { return sample_v_; }
};

/// Dirac mass (order 0) or Dirac-derivative (order 1) term at a point of [0, 1].
struct AtomicTerm {
    double location = 0.0;
    double weight = 0.0;
    int order = 0;
};

/// Distributional coefficient: integrable smooth part, finite atomic part, and
/// an optional first-derivative density g acting as <g, w> = int g w' dx.
/// The gradient part arises from the multiplier transform and is absent in
/// user-supplied problems.
struct GeneralizedCoefficient {
    std::optional<ScalarCoefficient> smooth;
    std::vector<AtomicTerm> atoms;
    std::optional<ScalarCoefficient> gradient;

    bool empty() const { return !smooth && atoms.empty() && !gradient; }
};

/// Atoms sorted by (location, order), same-slot weights merged, zeros dropped.
GeneralizedCoefficient canonicalize(GeneralizedCoefficient coeff);

/// Action of the coefficient on a piecewise-polynomial test function:
/// atoms evaluate pointwise (order 1 with the distributional sign,
/// <d'_a, w> = -w'(a)), smooth and gradient parts integrate exactly.
double apply_coefficient(const GeneralizedCoefficient& coeff, const PiecewisePoly& w);

}  // namespace signreg
