#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "signreg/assembly.hpp"
#include "signreg/errors.hpp"

#include "oracles.hpp"

using namespace signreg;

namespace {

Problem cantilever() {
    Problem p;
    p.subspace = SubspaceSpec::clamped_left();
    return p;
}

Problem threepoint_problem() {
    Problem p;
    p.q.atoms = {{1.0, 1.0, 0}};
    p.h.smooth = ScalarCoefficient::constant(1.0);
    p.h.atoms = {{0.5, 1.0, 0}, {1.0, 1.0, 0}, {1.0, -1.0, 1}};
    p.subspace = SubspaceSpec::clamped_left();
    return p;
}

}  // namespace

TEST_CASE("build_mesh honors atoms and requested points") {
    Mesh m = build_mesh(threepoint_problem(), 4);
    CHECK(m.find_node(0.0) >= 0);
    CHECK(m.find_node(0.5) >= 0);
    CHECK(m.find_node(1.0) >= 0);

    Mesh m2 = build_mesh(cantilever(), 2);
    REQUIRE(m2.n_nodes() == 3);
    CHECK(m2.nodes[1] == doctest::Approx(0.5));

    std::vector<double> extra{0.3};
    Mesh m3 = build_mesh(cantilever(), 2, extra);
    CHECK(m3.find_node(0.3) >= 0);
    CHECK_THROWS_AS(build_mesh(cantilever(), 1), Error);
}

TEST_CASE("hermite evaluation reproduces cubics") {
    Mesh m;
    m.nodes = {0.0, 1.0};
    auto x2 = FiniteElementFunction::interpolate(
        m, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
    CHECK(x2.evaluate(0.5, 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x2.evaluate(0.37) == doctest::Approx(0.37 * 0.37).epsilon(1e-14));

    auto zero = FiniteElementFunction(m, {0.0, 0.0, 0.0, 0.0});
    for (int k = 0; k <= 3; ++k) CHECK(zero.evaluate(0.7, k) == 0.0);

    auto x3 = FiniteElementFunction::interpolate(
        m, [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; });
    CHECK(x3.evaluate(0.5, 3, Side::Left) == doctest::Approx(6.0));
    CHECK(x3.evaluate(0.5, 3, Side::Right) == doctest::Approx(6.0));
    CHECK_THROWS_AS(x3.evaluate(1.2), OutOfDomain);
}

TEST_CASE("single-element bending block equals the cubic Hermite beam matrix") {
    Mesh m;
    m.nodes = {0.0, 1.0};
    Problem p;  // p = 1, unconstrained
    DiscreteOperator op = assemble(p, m);

    // oracle: direct quadrature of the shape second derivatives
    auto shape2 = [](int a, double x) {
        switch (a) {
            case 0: return -6.0 + 12.0 * x;
            case 1: return -4.0 + 6.0 * x;
            case 2: return 6.0 - 12.0 * x;
            default: return -2.0 + 6.0 * x;
        }
    };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double exact = oracles::simpson(
                [&](double x) { return shape2(a, x) * shape2(b, x); }, 0.0, 1.0, 8);
            CHECK(op.stiffness.entry(a, b) == doctest::Approx(exact).epsilon(1e-13));
        }
    CHECK(op.stiffness.entry(0, 0) == doctest::Approx(12.0));
}

TEST_CASE("atoms land on single dofs") {
    Problem base = cantilever();
    Mesh m = build_mesh(base, 4);
    DiscreteOperator op0 = assemble(base, m);

    Problem with_h = base;
    with_h.h.atoms = {{0.5, 1.0, 0}};
    DiscreteOperator op1 = assemble(with_h, m);
    int node = m.find_node(0.5);
    // clamped left end removes two dofs before the interior block
    int vdof = 2 * node - 2;
    for (int i = 0; i < op0.n_reduced(); ++i)
        for (int j = std::max(0, i - 3); j <= i; ++j) {
            double d = op1.stiffness.entry(i, j) - op0.stiffness.entry(i, j);
            if (i == vdof && j == vdof)
                CHECK(d == doctest::Approx(1.0));
            else
                CHECK(d == 0.0);
        }

    Problem with_q = base;
    with_q.q.atoms = {{1.0, 1.0, 0}};
    DiscreteOperator op2 = assemble(with_q, m);
    int ddof = 2 * m.find_node(1.0) - 2 + 1;
    CHECK(op2.stiffness.entry(ddof, ddof) - op0.stiffness.entry(ddof, ddof) ==
          doctest::Approx(1.0));
}

TEST_CASE("assembly requires atom locations on the mesh") {
    Problem p = cantilever();
    p.h.atoms = {{0.3, 1.0, 0}};
    Mesh m = build_mesh(cantilever(), 4);  // mesh built without the atom
    CHECK_THROWS_AS(assemble(p, m), MeshMissingAtom);
}

TEST_CASE("factorization verdicts") {
    Mesh m = build_mesh(cantilever(), 16);
    CHECK(factorize(assemble(cantilever(), m)).positive_definite());

    Problem free_free;  // rigid modes
    Mesh mf = build_mesh(free_free, 16);
    DiscreteOperator opf = assemble(free_free, mf);
    Factorization ff = factorize(opf);
    CHECK_FALSE(ff.positive_definite());
    CHECK_THROWS_AS(ff.solve(LoadSpec::delta(0.0)), NotPositiveDefinite);
#ifdef SIGNREG_HAVE_EIGEN
    double lam = oracles::smallest_eigenvalue(
        opf.n_reduced(), [&](int i, int j) { return opf.stiffness.entry(i, j); });
    CHECK(lam < 1e-9);
#endif

    Problem sagging = cantilever();
    sagging.h.smooth = ScalarCoefficient::constant(-500.0);
    Mesh ms = build_mesh(sagging, 64);
    DiscreteOperator ops = assemble(sagging, ms);
    Factorization fs = factorize(ops);
    CHECK_FALSE(fs.positive_definite());
#ifdef SIGNREG_HAVE_EIGEN
    double lam_s = oracles::smallest_eigenvalue(
        ops.n_reduced(), [&](int i, int j) { return ops.stiffness.entry(i, j); });
    CHECK(lam_s < 0.0);
#endif
}

TEST_CASE("cantilever point and uniform loads match closed forms") {
    Mesh m = build_mesh(cantilever(), 16);
    Factorization fact = factorize(assemble(cantilever(), m));

    FiniteElementFunction tip = fact.solve(LoadSpec::delta(1.0));
    CHECK(tip.evaluate(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fact.solve_residual(LoadSpec::delta(1.0), tip) <= 1e-12);

    FiniteElementFunction uni = fact.solve(LoadSpec::density(ScalarCoefficient::constant(1.0)));
    CHECK(uni.evaluate(1.0) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

    LoadSpec zero;
    FiniteElementFunction z = fact.solve(zero);
    CHECK(z.max_abs() == 0.0);

    CHECK_THROWS_AS(fact.solve(LoadSpec::delta(0.33)), PointNotOnMesh);
}

TEST_CASE("point-load solutions are exact between nodes") {
    // for constant p and atomic coefficients the true solution is a piecewise
    // cubic in the trial space
    Mesh m = build_mesh(cantilever(), 8, std::vector<double>{0.625});
    Factorization fact = factorize(assemble(cantilever(), m));
    FiniteElementFunction y = fact.solve(LoadSpec::delta(0.625));
    for (double t : {0.05, 0.21, 0.4, 0.59, 0.625, 0.77, 0.93, 1.0})
        CHECK(y.evaluate(t) == doctest::Approx(oracles::cantilever_green(t, 0.625)).epsilon(1e-10));
}

TEST_CASE("assembled quadratic form matches direct integration") {
    Problem p;
    p.p = ScalarCoefficient::constant(2.0);
    p.q.atoms = {{0.5, 0.7, 0}};
    p.h.smooth = ScalarCoefficient::constant(3.0);
    p.h.atoms = {{0.25, -0.5, 0}, {0.75, 0.8, 1}};
    Mesh m = build_mesh(p, 8);
    DiscreteOperator op = assemble(p, m);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> dofs(2 * m.nodes.size());
        for (double& v : dofs) v = (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        FiniteElementFunction u(m, dofs);

        double direct = 0.0;
        for (int e = 0; e < m.n_elements(); ++e)
            direct += oracles::simpson(
                [&](double x) {
                    double upp = u.evaluate(x, 2, x == m.nodes[e + 1] ? Side::Left : Side::Right);
                    double uu = u.evaluate(x);
                    return 2.0 * upp * upp + 3.0 * uu * uu;
                },
                m.nodes[e], m.nodes[e + 1], 64);
        double d05 = u.evaluate(0.5, 1);
        direct += 0.7 * d05 * d05;
        double v025 = u.evaluate(0.25);
        direct += -0.5 * v025 * v025;
        // order-1 atom acts as -(u' u + u u') = -2 u u'
        direct += 0.8 * (-2.0) * u.evaluate(0.75) * u.evaluate(0.75, 1);

        CHECK(op.quadratic_form(u) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("stiffness is exactly symmetric") {
    Mesh m = build_mesh(threepoint_problem(), 8);
    DiscreteOperator op = assemble(threepoint_problem(), m);
    for (int i = 0; i < op.n_reduced(); ++i)
        for (int j = std::max(0, i - 3); j <= i; ++j)
            CHECK(op.stiffness.entry(i, j) - op.stiffness.entry(j, i) == 0.0);
}

TEST_CASE("energy error decays at second order for a smooth load") {
    // exact energy: a(y, y) = int (y'')^2 = 1/20 for f = 1 on the cantilever
    std::vector<double> errs;
    for (int n : {4, 8, 16}) {
        Mesh m = build_mesh(cantilever(), n);
        Factorization fact = factorize(assemble(cantilever(), m));
        FiniteElementFunction y =
            fact.solve(LoadSpec::density(ScalarCoefficient::constant(1.0)));
        double energy = y.integral();  // a(y_h, y_h) = <f, y_h> for f = 1
        errs.push_back(std::sqrt(std::max(0.0, 1.0 / 20.0 - energy)));
    }
    double rate1 = std::log2(errs[0] / errs[1]);
    double rate2 = std::log2(errs[1] / errs[2]);
    CHECK(rate1 >= 1.8);
    CHECK(rate2 >= 1.8);
}

TEST_CASE("triplet dump format") {
    Mesh m;
    m.nodes = {0.0, 1.0};
    DiscreteOperator op = assemble(Problem{}, m);
    std::ostringstream os;
    op.stiffness.dump_triplets(os);
    std::istringstream in(os.str());
    int i = -1, j = -1;
    double v = 0.0;
    in >> i >> j >> v;
    CHECK(i == 0);
    CHECK(j == 0);
    CHECK(v == doctest::Approx(12.0).epsilon(1e-14));
}
