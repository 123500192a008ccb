#include "signreg/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "signreg/errors.hpp"

namespace signreg {

namespace {

void require_unconstrained(const Problem& problem, const char* what) {
    if (!problem.subspace.functionals.empty())
        throw ShapeMismatch(std::string(what) + " requires the full space W_2^2 "
                                                "(no essential constraints)");
}

double single_left_atom_weight(const GeneralizedCoefficient& h) {
    GeneralizedCoefficient c = canonicalize(h);
    if (c.smooth || c.gradient || c.atoms.size() != 1) return 0.0;
    const AtomicTerm& a = c.atoms[0];
    if (a.location != 0.0 || a.order != 0) return 0.0;
    return a.weight;
}

}  // namespace

double SturmWeight::tau_inverse(double u) const { return monotone_inverse(tau, u); }

SturmWeight sturm_weight(const SecondOrderProblem& s_problem, const Mesh& mesh) {
    DiscreteOperator s_op = assemble(s_problem, mesh);
    Factorization fact = factorize(s_op);
    if (!fact.positive_definite())
        throw SNotPositive("the second-order form S is not positive definite "
                           "(min pivot " + std::to_string(fact.min_pivot()) + ")");

    LoadSpec load;
    load.points = {{0.0, 1.0, 0}, {1.0, 1.0, 0}};
    FiniteElementFunction u = fact.solve(load);

    double mass = u.integral();
    if (!(mass > 0.0)) throw SigmaNotPositive("S^{-1}(d_0 + d_1) has nonpositive mass");
    double omega = 1.0 / mass;

    std::vector<double> dofs = u.dofs();
    for (double& v : dofs) v *= omega;
    FiniteElementFunction sigma(mesh, std::move(dofs));

    SturmWeight w;
    w.sigma_min = sigma.min_value(16);
    if (!(w.sigma_min > 0.0))
        throw SigmaNotPositive("Sturm weight is not uniformly positive on the grid (min " +
                               std::to_string(w.sigma_min) + ")");
    w.omega = omega;
    w.tau = sigma.as_piecewise().antiderivative();
    w.sigma = std::move(sigma);
    return w;
}

TransformResult variable_change(const SturmWeight& weight, const Problem& problem) {
    require_unconstrained(problem, "variable change");
    double alpha = single_left_atom_weight(problem.h);
    if (!(alpha > 0.0))
        throw ShapeMismatch("variable change requires h = alpha d_0 with alpha > 0");

    const int fine = 8 * weight.sigma.mesh().n_elements();
    std::vector<double> us(fine + 1), vals(fine + 1);
    for (int j = 0; j <= fine; ++j) {
        double u = static_cast<double>(j) / fine;
        double x = weight.tau_inverse(u);
        double s = weight.sigma.evaluate(x);
        us[j] = u;
        vals[j] = problem.p.eval(x) * s * s * s;
    }

    TransformResult r;
    r.kind = TransformKind::VariableChange;
    r.sigma = weight.sigma;
    r.sigma_min = weight.sigma_min;
    r.omega = weight.omega;
    r.alpha = alpha;
    r.beta = weight.omega * weight.sigma.evaluate(0.0);
    r.gamma = weight.omega * weight.sigma.evaluate(1.0);
    r.tau = weight.tau;

    Problem t;
    t.p = ScalarCoefficient::sampled(std::move(us), std::move(vals));
    t.q.atoms = {{0.0, r.beta, 0}, {1.0, r.gamma, 0}};
    t.h.atoms = {{0.0, r.alpha, 0}};
    r.transformed = validated(t);
    return r;
}

FiniteElementFunction multiplier_weight(const Factorization& fact) {
    require_unconstrained(fact.op().problem, "multiplier weight");
    fact.require_positive_definite();
    FiniteElementFunction sigma = fact.solve(LoadSpec::delta(0.0));
    double mn = sigma.min_value(16);
    if (!(mn > 0.0))
        throw SigmaNotPositive("L^{-1} d_0 is not uniformly positive on the grid (min " +
                               std::to_string(mn) + ")");
    return sigma;
}

TransformResult multiplier_transform(const FiniteElementFunction& sigma,
                                     const Problem& problem) {
    require_unconstrained(problem, "multiplier transform");
    if (!(sigma.min_value(16) > 0.0))
        throw SigmaNotPositive("multiplier requires a uniformly positive sigma");

    PiecewisePoly s = sigma.as_piecewise();
    PiecewisePoly ds = s.derivative();
    PiecewisePoly dds = ds.derivative();
    const PiecewisePoly& p = problem.p.as_piecewise();

    TransformResult r;
    r.kind = TransformKind::Multiplier;
    r.sigma = sigma;
    r.sigma_min = sigma.min_value(16);
    r.alpha = sigma.evaluate(0.0);

    Problem t;
    t.p = ScalarCoefficient::piecewise(p.product(s).product(s));

    // 2p[2(sigma')^2 - sigma sigma''], assembled by quadrature later
    PiecewisePoly smooth =
        p.product(ds.product(ds).scaled(4.0).sum(s.product(dds).scaled(-2.0)));
    // p (sigma^2)' acting on the first derivative of the test pair
    PiecewisePoly gradient = p.product(s.product(ds).scaled(2.0));

    GeneralizedCoefficient q = canonicalize(problem.q);
    if (q.smooth) smooth = smooth.sum(q.smooth->as_piecewise().product(s).product(s));
    if (q.gradient) {
        // <g, (sigma^2 w)'> = int g (sigma^2)' w + int g sigma^2 w'
        const PiecewisePoly& g = q.gradient->as_piecewise();
        smooth = smooth.sum(g.product(s.product(ds).scaled(2.0)));
        gradient = gradient.sum(g.product(s).product(s));
    }
    t.q.smooth = ScalarCoefficient::piecewise(std::move(smooth));
    t.q.gradient = ScalarCoefficient::piecewise(std::move(gradient));
    for (const AtomicTerm& a : q.atoms) {
        double sa = sigma.evaluate(a.location);
        t.q.atoms.push_back({a.location, a.weight * sa * sa, 0});
    }

    t.h.atoms = {{0.0, r.alpha, 0}};
    r.transformed = validated(t);
    return r;
}

double verify_conjugation(const DiscreteOperator& original, const TransformResult& transform,
                          std::span<const FiniteElementFunction> probes) {
    if (probes.empty()) return 0.0;
    DiscreteOperator hat = assemble(transform.transformed, probes.front().mesh());

    // Vy is interpolated on a fresh dyadic refinement; a node union with the
    // mapped probe nodes would create sliver elements.
    Mesh x_mesh = build_mesh(original.problem, 2 * original.mesh.n_elements());
    DiscreteOperator orig_fine = assemble(original.problem, x_mesh);

    double worst = 0.0;
    for (const FiniteElementFunction& y : probes) {
        double b = hat.quadratic_form(y);
        FiniteElementFunction vy = [&] {
            if (transform.kind == TransformKind::VariableChange) {
                const PiecewisePoly& tau = *transform.tau;
                const FiniteElementFunction& sig = transform.sigma;
                return FiniteElementFunction::interpolate(
                    x_mesh,
                    [&](double x) { return y.evaluate(std::clamp(tau.eval(x), 0.0, 1.0)); },
                    [&](double x) {
                        double u = std::clamp(tau.eval(x), 0.0, 1.0);
                        return y.evaluate(u, 1) * sig.evaluate(x);
                    });
            }
            const FiniteElementFunction& sig = transform.sigma;
            return FiniteElementFunction::interpolate(
                x_mesh, [&](double x) { return sig.evaluate(x) * y.evaluate(x); },
                [&](double x) {
                    return sig.evaluate(x, 1) * y.evaluate(x) +
                           sig.evaluate(x) * y.evaluate(x, 1);
                });
        }();
        double a = orig_fine.quadratic_form(vy);
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        worst = std::max(worst, std::abs(a - b) / scale);
    }
    return worst;
}

std::vector<FiniteElementFunction> conjugation_probes(const Mesh& mesh) {
    std::vector<FiniteElementFunction> probes;
    auto cubic = [&](double c0, double c1, double c2, double c3) {
        Poly p({c0, c1, c2, c3});
        Poly d = p.derivative();
        probes.push_back(FiniteElementFunction::interpolate(
            mesh, [&](double x) { return p.eval(x); }, [&](double x) { return d.eval(x); }));
    };
    cubic(1.0, 1.0, 0.0, 0.0);
    cubic(-0.3, 0.0, 1.0, 0.0);
    cubic(0.0, 0.0, -1.0, 1.0);
    cubic(0.5, -1.0, 0.0, 1.0);
    return probes;
}

}  // namespace signreg
