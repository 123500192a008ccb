#include "signreg/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "signreg/errors.hpp"

namespace signreg {

std::vector<double> ConstraintMap::expand(const std::vector<double>& reduced) const {
    std::vector<double> full(n_full, 0.0);
    for (int i = 0; i < n_full; ++i)
        for (const auto& [r, c] : rows[i]) full[i] += c * reduced[r];
    return full;
}

std::vector<double> ConstraintMap::reduce(const std::vector<double>& full) const {
    std::vector<double> red(n_reduced, 0.0);
    for (int i = 0; i < n_full; ++i)
        for (const auto& [r, c] : rows[i]) red[r] += c * full[i];
    return red;
}

ConstraintMap make_constraint_map(const SubspaceSpec& subspace, int n_nodes) {
    ConstraintMap map;
    map.n_full = 2 * n_nodes;
    map.rows.assign(map.n_full, {});

    int next = 0;
    auto endpoint_rows = [&](int node, int endpoint) {
        auto fs = subspace.at(endpoint);
        int v = 2 * node, d = 2 * node + 1;
        if (fs.empty()) {
            map.rows[v] = {{next++, 1.0}};
            map.rows[d] = {{next++, 1.0}};
        } else if (fs.size() == 1) {
            // one reduced dof along the unit null vector of (a, b)
            double a = fs[0].a, b = fs[0].b;
            double norm = std::hypot(a, b);
            map.rows[v] = {{next, -b / norm}};
            map.rows[d] = {{next, a / norm}};
            ++next;
        }
        // two functionals: both dofs pinned to zero (rows stay empty)
    };

    endpoint_rows(0, 0);
    for (int i = 1; i + 1 < n_nodes; ++i) {
        map.rows[2 * i] = {{next++, 1.0}};
        map.rows[2 * i + 1] = {{next++, 1.0}};
    }
    if (n_nodes > 1) endpoint_rows(n_nodes - 1, 1);
    map.n_reduced = next;
    return map;
}

namespace {

struct ElementShapes {
    // shape polynomials in the reference variable, slope dofs scaled by length
    Poly s[4], ds[4], dds[4];
    double len = 0.0;
};

ElementShapes element_shapes(double len) {
    ElementShapes e;
    e.len = len;
    for (int a = 0; a < 4; ++a) {
        Poly base = hermite_shape(a).scaled(a % 2 == 1 ? len : 1.0);
        e.s[a] = base;
        e.ds[a] = base.derivative();
        e.dds[a] = e.ds[a].derivative();
    }
    return e;
}

/// Integrates coeff(x) * fa(xi) * fb(xi) over one element, splitting at the
/// coefficient's interior breakpoints. Gauss point count follows the
/// polynomial degree, so the result is exact for the representable classes.
class ElementIntegrator {
public:
    ElementIntegrator(const PiecewisePoly& coeff, double x0, double len)
        : coeff_(coeff), x0_(x0), len_(len) {
        segs_.push_back(0.0);
        for (double b : coeff.breaks())
            if (b > x0 + 1e-14 && b < x0 + len - 1e-14) segs_.push_back((b - x0) / len);
        segs_.push_back(1.0);
        std::sort(segs_.begin(), segs_.end());
    }

    double integrate(const Poly& fa, const Poly& fb) const {
        const int deg = coeff_.max_degree() + fa.degree() + fb.degree();
        const GaussRule& rule = gauss_rule(gauss_points_for_degree(deg));
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < segs_.size(); ++k) {
            const double a = segs_[k], b = segs_[k + 1];
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            double acc = 0.0;
            for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                const double xi = mid + half * rule.nodes[g];
                const double x = x0_ + len_ * xi;
                acc += rule.weights[g] * coeff_.eval(x) * fa.eval(xi) * fb.eval(xi);
            }
            total += acc * half;
        }
        return total * len_;  // dx = len * dxi
    }

private:
    const PiecewisePoly& coeff_;
    double x0_, len_;
    std::vector<double> segs_;
};

class Assembler {
public:
    Assembler(const Mesh& mesh, const ConstraintMap& map)
        : mesh_(mesh), map_(map), matrix_(map.n_reduced, 3) {}

    void add(int i_full, int j_full, double v) {
        for (const auto& [r, ci] : map_.rows[i_full])
            for (const auto& [s, cj] : map_.rows[j_full])
                if (r >= s) matrix_.add(r, s, ci * cj * v);
    }

    void add_smooth_term(const ScalarCoefficient& coeff, int da, int db) {
        const PiecewisePoly& pp = coeff.as_piecewise();
        for (int e = 0; e < mesh_.n_elements(); ++e) {
            const double x0 = mesh_.nodes[e];
            const double len = mesh_.length(e);
            ElementShapes sh = element_shapes(len);
            ElementIntegrator integ(pp, x0, len);
            const double scale = 1.0 / std::pow(len, da + db);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const Poly& fa = da == 0 ? sh.s[a] : (da == 1 ? sh.ds[a] : sh.dds[a]);
                    const Poly& fb = db == 0 ? sh.s[b] : (db == 1 ? sh.ds[b] : sh.dds[b]);
                    double v = integ.integrate(fa, fb) * scale;
                    if (v != 0.0) add(2 * e + a, 2 * e + b, v);
                }
        }
    }

    int node_of_atom(double loc) const {
        int node = mesh_.find_node(loc);
        if (node < 0)
            throw MeshMissingAtom("atom location " + std::to_string(loc) +
                                  " is not a mesh node");
        return node;
    }

    /// <coeff, w> acting on the pair slot: QSlot pairs derivatives (w = y'z'),
    /// HSlot pairs values (w = yz).
    void add_generalized(const GeneralizedCoefficient& coeff, FormSlot slot) {
        const int d = slot == FormSlot::QSlot ? 1 : 0;
        for (const AtomicTerm& atom : coeff.atoms) {
            int node = node_of_atom(atom.location);
            int vdof = 2 * node, ddof = 2 * node + 1;
            if (slot == FormSlot::QSlot) {
                // only phi' of the slope dof is nonzero at a node
                add(ddof, ddof, atom.weight);
            } else if (atom.order == 0) {
                add(vdof, vdof, atom.weight);
            } else {
                // <d'_a, yz> = -(y'(a)z(a) + y(a)z'(a))
                add(ddof, vdof, -atom.weight);
                add(vdof, ddof, -atom.weight);
            }
        }
        if (coeff.smooth) add_smooth_term(*coeff.smooth, d, d);
        if (coeff.gradient) {
            add_smooth_term(*coeff.gradient, d + 1, d);
            add_smooth_term(*coeff.gradient, d, d + 1);
        }
    }

    SymBandMatrix take() { return std::move(matrix_); }

private:
    const Mesh& mesh_;
    const ConstraintMap& map_;
    SymBandMatrix matrix_;
};

}  // namespace

DiscreteOperator assemble(const Problem& problem, const Mesh& mesh) {
    Problem canon = validated(problem);
    ConstraintMap map = make_constraint_map(canon.subspace, mesh.n_nodes());
    Assembler asmb(mesh, map);
    asmb.add_smooth_term(canon.p, 2, 2);
    for (const AtomicTerm& a : canon.q.atoms)
        if (a.order != 0) throw IllegalAtomOrder("q admits order-0 atoms only");
    asmb.add_generalized(canon.q, FormSlot::QSlot);
    asmb.add_generalized(canon.h, FormSlot::HSlot);
    return DiscreteOperator{std::move(canon), mesh, std::move(map), asmb.take()};
}

DiscreteOperator assemble(const SecondOrderProblem& problem, const Mesh& mesh) {
    for (const AtomicTerm& a : problem.q.atoms)
        if (a.order != 0) throw IllegalAtomOrder("second-order q admits order-0 atoms only");
    ConstraintMap map = make_constraint_map(SubspaceSpec::unconstrained(), mesh.n_nodes());
    Assembler asmb(mesh, map);
    asmb.add_smooth_term(problem.p, 1, 1);
    // q pairs with yz in the second-order form
    GeneralizedCoefficient q = canonicalize(problem.q);
    for (const AtomicTerm& atom : q.atoms) {
        int node = asmb.node_of_atom(atom.location);
        asmb.add(2 * node, 2 * node, atom.weight);
    }
    if (q.smooth) asmb.add_smooth_term(*q.smooth, 0, 0);
    if (q.gradient) {
        asmb.add_smooth_term(*q.gradient, 1, 0);
        asmb.add_smooth_term(*q.gradient, 0, 1);
    }
    Problem carrier;  // the discrete operator records p and q of the form
    carrier.p = problem.p;
    carrier.q = q;
    return DiscreteOperator{std::move(carrier), mesh, std::move(map), asmb.take()};
}

SymBandMatrix assemble_coefficient_matrix(const GeneralizedCoefficient& coeff, const Mesh& mesh,
                                          FormSlot slot) {
    ConstraintMap map = make_constraint_map(SubspaceSpec::unconstrained(), mesh.n_nodes());
    Assembler asmb(mesh, map);
    asmb.add_generalized(canonicalize(coeff), slot);
    return asmb.take();
}

double DiscreteOperator::quadratic_form(const FiniteElementFunction& u) const {
    std::vector<double> red = constraints.reduce(u.dofs());
    // extended-precision accumulation: the entries grow like 1/len^3 while
    // the form value stays O(1), so double accumulation loses digits
    long double v = 0.0L;
    const int n = stiffness.size(), bw = stiffness.bandwidth();
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - bw); j <= i; ++j) {
            long double term = static_cast<long double>(stiffness.entry(i, j)) * red[i] * red[j];
            v += (i == j) ? term : 2.0L * term;
        }
    }
    return static_cast<double>(v);
}

std::vector<double> assemble_load(const LoadSpec& load, const Mesh& mesh) {
    std::vector<double> f(2 * mesh.nodes.size(), 0.0);
    for (const PointTerm& pt : load.points) {
        int node = mesh.find_node(pt.location);
        if (node < 0)
            throw PointNotOnMesh("point load at " + std::to_string(pt.location) +
                                 " is not a mesh node");
        if (pt.order == 0)
            f[2 * node] += pt.weight;
        else if (pt.order == 1)
            f[2 * node + 1] -= pt.weight;  // <d'_s, phi> = -phi'(s)
        else
            throw Error("point load order must be 0 or 1");
    }
    auto add_density = [&](const PiecewisePoly& pp) {
        const double lo = pp.domain_start(), hi = pp.domain_end();
        for (int e = 0; e < mesh.n_elements(); ++e) {
            const double x0 = mesh.nodes[e];
            const double len = mesh.length(e);
            if (x0 + len <= lo + 1e-15 || x0 >= hi - 1e-15) continue;
            ElementShapes sh = element_shapes(len);
            // clip the element to the density support
            std::vector<double> segs{std::max(0.0, (lo - x0) / len),
                                     std::min(1.0, (hi - x0) / len)};
            for (double b : pp.breaks()) {
                double xi = (b - x0) / len;
                if (xi > segs.front() + 1e-14 && xi < segs.back() - 1e-14) segs.push_back(xi);
            }
            std::sort(segs.begin(), segs.end());
            const GaussRule& rule =
                gauss_rule(gauss_points_for_degree(pp.max_degree() + 3));
            for (int a = 0; a < 4; ++a) {
                double acc = 0.0;
                for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
                    const double half = 0.5 * (segs[k + 1] - segs[k]);
                    const double mid = 0.5 * (segs[k + 1] + segs[k]);
                    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                        const double xi = mid + half * rule.nodes[g];
                        acc += rule.weights[g] * pp.eval(x0 + len * xi) * sh.s[a].eval(xi) *
                               half;
                    }
                }
                f[2 * e + a] += acc * len;
            }
        }
    };
    for (const ScalarCoefficient& c : load.densities) add_density(c.as_piecewise());
    for (const PiecewisePoly& pp : load.raw_densities) add_density(pp);
    return f;
}

void Factorization::require_positive_definite() const {
    if (!positive_definite())
        throw NotPositiveDefinite("operator is not positive definite at this discretization "
                                  "(min pivot " +
                                  std::to_string(min_pivot()) + ")");
}

std::vector<double> Factorization::solve_reduced(const std::vector<double>& rhs) const {
    std::vector<double> x = ldlt_.solve(rhs);
    // iterative refinement with extended-precision residuals recovers the
    // forward accuracy lost to the 1/len^4 conditioning of the bending term
    const SymBandMatrix& k = op_->stiffness;
    const int n = k.size(), bw = k.bandwidth();
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) {
            long double acc = rhs[i];
            for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j)
                acc -= static_cast<long double>(k.entry(i, j)) * x[j];
            r[i] = static_cast<double>(acc);
        }
        std::vector<double> dx = ldlt_.solve(r);
        for (int i = 0; i < n; ++i) x[i] += dx[i];
    }
    return x;
}

FiniteElementFunction Factorization::solve(const LoadSpec& load) const {
    require_positive_definite();
    std::vector<double> f = assemble_load(load, op_->mesh);
    std::vector<double> red = op_->constraints.reduce(f);
    std::vector<double> x = solve_reduced(red);
    return FiniteElementFunction(op_->mesh, op_->constraints.expand(x));
}

double Factorization::solve_residual(const LoadSpec& load, const FiniteElementFunction& u) const {
    std::vector<double> b = op_->constraints.reduce(assemble_load(load, op_->mesh));
    std::vector<double> x = op_->constraints.reduce(u.dofs());
    std::vector<double> kx = op_->stiffness.multiply(x);
    double rnorm = 0.0, bnorm = 0.0, xnorm = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        rnorm = std::max(rnorm, std::abs(kx[i] - b[i]));
        bnorm = std::max(bnorm, std::abs(b[i]));
        xnorm = std::max(xnorm, std::abs(x[i]));
    }
    return rnorm / (op_->stiffness.inf_norm() * xnorm + bnorm + 1e-300);
}

Factorization factorize(const DiscreteOperator& op, double pivot_tol_rel) {
    return factorize(std::make_shared<DiscreteOperator>(op), pivot_tol_rel);
}

Factorization factorize(std::shared_ptr<const DiscreteOperator> op, double pivot_tol_rel) {
    BandLDLT ldlt(op->stiffness, pivot_tol_rel);
    return Factorization(std::move(op), std::move(ldlt));
}

}  // namespace signreg
