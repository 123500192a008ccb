#include "signreg/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signreg/errors.hpp"

namespace signreg {

const Poly& hermite_shape(int index) {
    static const Poly shapes[4] = {
        Poly({1.0, 0.0, -3.0, 2.0}),   // value at left end
        Poly({0.0, 1.0, -2.0, 1.0}),   // slope at left end
        Poly({0.0, 0.0, 3.0, -2.0}),   // value at right end
        Poly({0.0, 0.0, -1.0, 1.0}),   // slope at right end
    };
    return shapes[index];
}

FiniteElementFunction::FiniteElementFunction(Mesh mesh, std::vector<double> dofs)
    : mesh_(std::move(mesh)), dofs_(std::move(dofs)) {
    if (dofs_.size() != 2 * mesh_.nodes.size())
        throw Error("finite element function: dof count does not match mesh");
}

FiniteElementFunction FiniteElementFunction::interpolate(
    const Mesh& mesh, const std::function<double(double)>& value,
    const std::function<double(double)>& deriv) {
    std::vector<double> dofs(2 * mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        dofs[2 * i] = value(mesh.nodes[i]);
        dofs[2 * i + 1] = deriv(mesh.nodes[i]);
    }
    return FiniteElementFunction(mesh, std::move(dofs));
}

double FiniteElementFunction::evaluate(double t, int order, Side side) const {
    if (order < 0 || order > 3) throw Error("evaluate: derivative order must be 0..3");
    int e = mesh_.element_of(t, side);
    const double x0 = mesh_.nodes[e];
    const double len = mesh_.length(e);
    const double xi = (t - x0) / len;
    double r = 0.0;
    for (int a = 0; a < 4; ++a) {
        Poly s = hermite_shape(a);
        for (int k = 0; k < order; ++k) s = s.derivative();
        double scale = (a % 2 == 1) ? len : 1.0;  // slope dofs carry the length
        int g = 2 * e + a;
        r += dofs_[g] * scale * s.eval(xi);
    }
    return r / std::pow(len, order);
}

PiecewisePoly FiniteElementFunction::as_piecewise() const {
    std::vector<Poly> pieces;
    pieces.reserve(mesh_.n_elements());
    for (int e = 0; e < mesh_.n_elements(); ++e) {
        const double len = mesh_.length(e);
        // local variable u = x - x_e, xi = u / len
        Poly acc = Poly::constant(0.0);
        for (int a = 0; a < 4; ++a) {
            const auto& c = hermite_shape(a).coeffs();
            std::vector<double> scaled(c.size());
            double il = 1.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                scaled[k] = c[k] * il;
                il /= len;
            }
            double w = dofs_[2 * e + a] * ((a % 2 == 1) ? len : 1.0);
            acc = acc + Poly(std::move(scaled)).scaled(w);
        }
        pieces.push_back(acc);
    }
    return PiecewisePoly(mesh_.nodes, std::move(pieces));
}

double FiniteElementFunction::integral() const { return as_piecewise().integral(); }

double FiniteElementFunction::max_abs(int samples_per_element) const {
    double m = 0.0;
    for (int e = 0; e < mesh_.n_elements(); ++e)
        for (int k = 0; k <= samples_per_element; ++k) {
            double t = mesh_.nodes[e] + mesh_.length(e) * k / samples_per_element;
            m = std::max(m, std::abs(evaluate(t)));
        }
    return m;
}

double FiniteElementFunction::min_value(int samples_per_element) const {
    double m = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh_.n_elements(); ++e)
        for (int k = 0; k <= samples_per_element; ++k) {
            double t = mesh_.nodes[e] + mesh_.length(e) * k / samples_per_element;
            m = std::min(m, evaluate(t));
        }
    return m;
}

FiniteElementFunction FiniteElementFunction::on_mesh(const Mesh& fine) const {
    std::vector<double> dofs(2 * fine.nodes.size());
    for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
        dofs[2 * i] = evaluate(fine.nodes[i], 0);
        dofs[2 * i + 1] = evaluate(fine.nodes[i], 1);
    }
    return FiniteElementFunction(fine, std::move(dofs));
}

}  // namespace signreg
