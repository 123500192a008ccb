#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "signreg/errors.hpp"
#include "signreg/green.hpp"
#include "signreg/signs.hpp"
#include "signreg/transforms.hpp"

#include "oracles.hpp"

using namespace signreg;

namespace {

Problem prop21_cosh() {
    Problem p;
    p.q.smooth = ScalarCoefficient::constant(1.0);
    p.h.atoms = {{0.0, 1.0, 0}};
    return p;
}

Problem prop11() {
    Problem p;
    p.q.atoms = {{0.0, 1.0, 0}, {1.0, 1.0, 0}};
    p.h.atoms = {{0.0, 1.0, 0}};
    return p;
}

FiniteElementFunction synthetic_sigma(const Mesh& mesh, double c0, double c1) {
    return FiniteElementFunction::interpolate(
        mesh, [&](double x) { return c0 + c1 * x; }, [&](double) { return c1; });
}

}  // namespace

TEST_CASE("sturm weight matches the hyperbolic oracle") {
    Mesh mesh = build_mesh(Problem{}, 64);
    SturmWeight w = sturm_weight(second_order_of(prop21_cosh()), mesh);

    CHECK(w.omega == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(w.sigma.evaluate(0.0) == doctest::Approx(oracles::cosh_sigma(0.0)).epsilon(1e-7));
    CHECK(w.sigma.as_piecewise().integral() == doctest::Approx(1.0).epsilon(1e-10));
    for (double x : {0.1, 0.33, 0.5, 0.8, 1.0})
        CHECK(w.sigma.evaluate(x) == doctest::Approx(oracles::cosh_sigma(x)).epsilon(1e-7));
    for (double x : {0.2, 0.5, 0.9})
        CHECK(w.tau.eval(x) == doctest::Approx(oracles::cosh_tau(x)).epsilon(1e-7));
}

TEST_CASE("an indefinite second-order form is rejected") {
    SecondOrderProblem s;
    s.q.smooth = ScalarCoefficient::constant(-50.0);
    Mesh mesh = build_mesh(Problem{}, 32);
    CHECK_THROWS_AS(sturm_weight(s, mesh), SNotPositive);
#ifdef SIGNREG_HAVE_EIGEN
    DiscreteOperator op = assemble(s, mesh);
    CHECK(oracles::smallest_eigenvalue(
              op.n_reduced(), [&](int i, int j) { return op.stiffness.entry(i, j); }) < 0.0);
#endif
}

TEST_CASE("endpoint q atoms give the flat weight and the identity change") {
    Problem p;
    p.q.atoms = {{0.0, 1.0, 0}, {1.0, 1.0, 0}};
    p.h.atoms = {{0.0, 1.0, 0}};
    Mesh mesh = build_mesh(p, 32);
    SturmWeight w = sturm_weight(second_order_of(p), mesh);
    CHECK(w.omega == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(w.sigma.evaluate(x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.tau.eval(x) == doctest::Approx(x).epsilon(1e-12));
    }
    TransformResult tr = variable_change(w, p);
    CHECK(tr.beta == doctest::Approx(w.omega).epsilon(1e-12));
    CHECK(tr.gamma == doctest::Approx(w.omega).epsilon(1e-12));
    for (double u : {0.0, 0.4, 1.0})
        CHECK(tr.transformed.p.eval(u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("variable change produces the first-reduction shape") {
    Mesh mesh = build_mesh(Problem{}, 64);
    SturmWeight w = sturm_weight(second_order_of(prop21_cosh()), mesh);
    TransformResult tr = variable_change(w, prop21_cosh());

    CHECK(tr.beta == doctest::Approx(0.540988).epsilon(1e-6));
    CHECK(tr.gamma == doctest::Approx(0.540988).epsilon(1e-6));
    CHECK(tr.alpha == doctest::Approx(1.0));

    // structural inventory: p_hat plus three positive endpoint atoms
    const Problem& t = tr.transformed;
    CHECK_FALSE(t.q.smooth.has_value());
    CHECK_FALSE(t.q.gradient.has_value());
    REQUIRE(t.q.atoms.size() == 2);
    CHECK(t.q.atoms[0].location == 0.0);
    CHECK(t.q.atoms[1].location == 1.0);
    CHECK(t.q.atoms[0].weight > 0.0);
    CHECK(t.q.atoms[1].weight > 0.0);
    REQUIRE(t.h.atoms.size() == 1);
    CHECK(t.h.atoms[0].weight > 0.0);
    CHECK(t.subspace.functionals.empty());

    // p_hat stays above (min p)(min sigma)^3
    double bound = 1.0 * std::pow(w.sigma_min, 3);
    CHECK(t.p.min_value() >= bound - 1e-9);

    // tau round trip
    for (double x : {0.0, 0.21, 0.5, 0.92, 1.0})
        CHECK(w.tau_inverse(w.tau.eval(x)) == doctest::Approx(x).epsilon(1e-10));
    CHECK(w.tau.eval(1.0, Side::Left) == doctest::Approx(1.0).epsilon(1e-10));

    Problem wrong;  // h missing
    CHECK_THROWS_AS(variable_change(w, wrong), ShapeMismatch);
    Problem clamped = prop21_cosh();
    clamped.subspace = SubspaceSpec::clamped_left();
    CHECK_THROWS_AS(variable_change(w, clamped), ShapeMismatch);
}

TEST_CASE("multiplier weight is the left kernel column") {
    Mesh mesh = build_mesh(prop11(), 32);
    Factorization fact = factorize(assemble(prop11(), mesh));
    FiniteElementFunction sigma = multiplier_weight(fact);
    std::vector<double> grid{0.0, 0.5, 1.0};
    Mesh kmesh = build_mesh(prop11(), 32, grid);
    Factorization kfact = factorize(assemble(prop11(), kmesh));
    GreenKernel k = green_matrix(kfact, grid, grid);
    CHECK(sigma.evaluate(0.0) == doctest::Approx(k.value(0, 0)).epsilon(1e-10));
    CHECK(sigma.evaluate(0.5) == doctest::Approx(k.value(1, 0)).epsilon(1e-10));
    CHECK(sigma.evaluate(0.0) > 0.0);

    Problem clamped;
    clamped.subspace = SubspaceSpec::clamped_left();
    Factorization cf = factorize(assemble(clamped, build_mesh(clamped, 16)));
    CHECK_THROWS_AS(multiplier_weight(cf), ShapeMismatch);
}

TEST_CASE("identity multiplier reproduces the problem and the form") {
    Problem p = prop11();
    Mesh mesh = build_mesh(p, 32);
    FiniteElementFunction sigma = synthetic_sigma(mesh, 1.0, 0.0);
    TransformResult tr = multiplier_transform(sigma, p);
    CHECK(tr.alpha == doctest::Approx(1.0));

    // q_hat keeps the original atoms, the added densities vanish
    REQUIRE(tr.transformed.q.atoms.size() == 2);
    CHECK(tr.transformed.q.atoms[0].weight == doctest::Approx(1.0));
    SymBandMatrix kq = assemble_coefficient_matrix(tr.transformed.q, mesh, FormSlot::QSlot);
    SymBandMatrix kq0 = assemble_coefficient_matrix(p.q, mesh, FormSlot::QSlot);
    for (int i = 0; i < kq.size(); ++i)
        for (int j = std::max(0, i - 3); j <= i; ++j)
            CHECK(kq.entry(i, j) == doctest::Approx(kq0.entry(i, j)).epsilon(1e-14));

    DiscreteOperator op = assemble(p, mesh);
    double residual = verify_conjugation(op, tr, conjugation_probes(mesh));
    CHECK(residual <= 1e-12);
}

TEST_CASE("multiplier densities match the symbolic expansion for sigma = 1 + x") {
    Problem p;  // q empty, h = d_0 so that L sigma = d_0 holds exactly
    p.h.atoms = {{0.0, 1.0, 0}};
    Mesh mesh = build_mesh(p, 16);
    FiniteElementFunction sigma = synthetic_sigma(mesh, 1.0, 1.0);
    TransformResult tr = multiplier_transform(sigma, p);

    // expected q_hat: smooth density 4, first-derivative density 2 + 2x
    REQUIRE(tr.transformed.q.smooth.has_value());
    REQUIRE(tr.transformed.q.gradient.has_value());
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(tr.transformed.q.smooth->eval(x) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(tr.transformed.q.gradient->eval(x) ==
              doctest::Approx(2.0 + 2.0 * x).epsilon(1e-12));
    }
    // p_hat = (1 + x)^2 exactly
    for (double x : {0.0, 0.3, 1.0})
        CHECK(tr.transformed.p.eval(x) == doctest::Approx((1 + x) * (1 + x)).epsilon(1e-12));

    // assembled q_hat form against an independent quadrature of the formula;
    // 5-point Gauss is exact for these integrands and avoids the two-sided
    // second derivatives at nodes
    SymBandMatrix kq = assemble_coefficient_matrix(tr.transformed.q, mesh, FormSlot::QSlot);
    auto shape = [&](int dof, double x, int order) {
        std::vector<double> dofs(2 * mesh.nodes.size(), 0.0);
        dofs[dof] = 1.0;
        return FiniteElementFunction(mesh, dofs).evaluate(x, order);
    };
    for (int i = 0; i < kq.size(); ++i)
        for (int j = std::max(0, i - 3); j <= i; ++j) {
            double direct = 0.0;
            for (int e = 0; e < mesh.n_elements(); ++e)
                direct += oracles::gauss5(
                    [&](double x) {
                        double di = shape(i, x, 1), dj = shape(j, x, 1);
                        double ddi = shape(i, x, 2), ddj = shape(j, x, 2);
                        return 4.0 * di * dj + (2.0 + 2.0 * x) * (ddi * dj + di * ddj);
                    },
                    mesh.nodes[e], mesh.nodes[e + 1]);
            CHECK(kq.entry(i, j) ==
                  doctest::Approx(direct).epsilon(1e-10).scale(std::max(1.0, std::abs(direct))));
        }

    // q atoms rescale by sigma^2 at their location
    Problem with_atom = p;
    with_atom.q.atoms = {{1.0, 0.7, 0}};
    TransformResult tr2 = multiplier_transform(sigma, with_atom);
    REQUIRE(tr2.transformed.q.atoms.size() == 1);
    CHECK(tr2.transformed.q.atoms[0].weight == doctest::Approx(0.7 * 4.0).epsilon(1e-12));

    // conjugation identity for this synthetic weight
    DiscreteOperator op = assemble(p, build_mesh(p, 512));
    double residual = verify_conjugation(op, tr, conjugation_probes(build_mesh(p, 512)));
    CHECK(residual <= 1e-8);
}

TEST_CASE("variable-change residual decays under refinement") {
    Problem p = prop21_cosh();
    std::vector<double> residuals;
    for (int n : {8, 16, 32}) {
        Mesh mesh = build_mesh(p, n);
        SturmWeight w = sturm_weight(second_order_of(p), mesh);
        TransformResult tr = variable_change(w, p);
        DiscreteOperator op = assemble(p, mesh);
        Mesh pm;
        for (int i = 0; i <= n; ++i) pm.nodes.push_back(static_cast<double>(i) / n);
        residuals.push_back(verify_conjugation(op, tr, conjugation_probes(pm)));
    }
    CHECK(residuals[1] < residuals[0]);
    CHECK(residuals[2] < residuals[1]);
    double order = std::log2(residuals[0] / residuals[2]) / 2.0;
    CHECK(order >= 1.8);
}

TEST_CASE("substitution operators preserve sign-change counts") {
    Mesh mesh = build_mesh(Problem{}, 64);
    SturmWeight w = sturm_weight(second_order_of(prop21_cosh()), mesh);
    SampledFunction f = random_sign_pattern(3, 23);
    // composition with the grid bijection tau keeps the value sequence
    std::vector<double> mapped;
    for (double u : f.points) mapped.push_back(w.tau_inverse(u));
    SignCount before = sign_changes(f.points, f.values, 0.0);
    SignCount after = sign_changes(mapped, f.values, 0.0);
    CHECK(before.changes == after.changes);

    // positive multiplier keeps the signs pointwise
    std::vector<double> scaled = f.values;
    for (std::size_t i = 0; i < scaled.size(); ++i)
        scaled[i] *= w.sigma.evaluate(f.points[i]);
    CHECK(sign_changes(f.points, scaled, 0.0).changes == before.changes);
}
