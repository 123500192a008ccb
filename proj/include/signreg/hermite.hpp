#pragma once

#include <functional>

#include "signreg/mesh.hpp"
#include "signreg/poly.hpp"

namespace signreg {

/// Cubic Hermite shape functions on the reference element [0, 1]:
/// index 0/2 carry endpoint values, 1/3 endpoint slopes (to be scaled by the
/// element length). The basis is C^1 across elements.
const Poly& hermite_shape(int index);

/// Globally C^1 piecewise cubic determined by (value, slope) pairs per node.
/// DOF layout: [v_0, d_0, v_1, d_1, ...].
class FiniteElementFunction {
public:
    FiniteElementFunction() = default;
    FiniteElementFunction(Mesh mesh, std::vector<double> dofs);

    /// Interpolant of the given value/derivative data at the mesh nodes.
    static FiniteElementFunction interpolate(const Mesh& mesh,
                                             const std::function<double(double)>& value,
                                             const std::function<double(double)>& deriv);

    /// Derivative of the given order (0..3) at t; order 3 is piecewise
    /// constant, so at nodes the side flag picks the element.
    double evaluate(double t, int order = 0, Side side = Side::Right) const;

    double value_at_node(int i) const { return dofs_[2 * i]; }
    double slope_at_node(int i) const { return dofs_[2 * i + 1]; }

    const Mesh& mesh() const { return mesh_; }
    const std::vector<double>& dofs() const { return dofs_; }

    PiecewisePoly as_piecewise() const;
    double integral() const;
    double max_abs(int samples_per_element = 8) const;
    double min_value(int samples_per_element = 8) const;

    /// Same function expressed on a finer mesh containing the current nodes.
    FiniteElementFunction on_mesh(const Mesh& fine) const;

private:
    Mesh mesh_;
    std::vector<double> dofs_;
};

}  // namespace signreg
