#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "signreg/errors.hpp"
#include "signreg/poly.hpp"

#include "oracles.hpp"

using namespace signreg;

TEST_CASE("polynomial arithmetic") {
    Poly p({1.0, -2.0, 0.0, 3.0});  // 1 - 2t + 3t^3
    CHECK(p.eval(0.0) == 1.0);
    CHECK(p.eval(2.0) == doctest::Approx(1.0 - 4.0 + 24.0));
    CHECK(p.derivative().eval(2.0) == doctest::Approx(-2.0 + 36.0));
    CHECK(p.antiderivative().eval(1.0) == doctest::Approx(1.0 - 1.0 + 0.75));
    Poly q({0.0, 1.0});
    CHECK((p * q).eval(1.5) == doctest::Approx(p.eval(1.5) * 1.5));
    CHECK((p + q).eval(0.7) == doctest::Approx(p.eval(0.7) + 0.7));
}

TEST_CASE("polynomial shift re-expansion") {
    Poly p({2.0, -1.0, 0.5, 1.0, -0.25});
    Poly s = p.shifted(0.37);
    for (double t : {-1.0, -0.2, 0.0, 0.31, 2.0})
        CHECK(s.eval(t) == doctest::Approx(p.eval(t + 0.37)).epsilon(1e-13));
}

TEST_CASE("piecewise polynomial evaluation and sides") {
    // |x - 1/2| style kink
    PiecewisePoly pp({0.0, 0.5, 1.0}, {Poly({0.5, -1.0}), Poly({0.0, 1.0})});
    CHECK(pp.eval(0.25) == doctest::Approx(0.25));
    CHECK(pp.eval(0.75) == doctest::Approx(0.25));
    CHECK(pp.eval_derivative(0.5, 1, Side::Left) == doctest::Approx(-1.0));
    CHECK(pp.eval_derivative(0.5, 1, Side::Right) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pp.eval(1.5), OutOfDomain);
}

TEST_CASE("piecewise antiderivative is continuous and integrates") {
    PiecewisePoly pp({0.0, 0.3, 1.0}, {Poly({1.0, 2.0}), Poly({1.6, 0.0, 3.0})});
    PiecewisePoly F = pp.antiderivative();
    CHECK(F.eval(0.0) == doctest::Approx(0.0));
    CHECK(F.eval(0.3, Side::Left) == doctest::Approx(F.eval(0.3, Side::Right)).epsilon(1e-14));
    double direct = oracles::simpson([&](double x) { return pp.eval(x); }, 0.0, 1.0, 2000);
    CHECK(pp.integral() == doctest::Approx(direct).epsilon(1e-10));
    CHECK(pp.integral(0.1, 0.9) ==
          doctest::Approx(oracles::simpson([&](double x) { return pp.eval(x); }, 0.1, 0.9, 2000))
              .epsilon(1e-10));
}

TEST_CASE("piecewise product and sum agree pointwise") {
    PiecewisePoly a({0.0, 0.4, 1.0}, {Poly({1.0, 1.0}), Poly({1.4, -0.5, 2.0})});
    PiecewisePoly b({0.0, 0.7, 1.0}, {Poly({0.5, 0.0, 1.0}), Poly({-2.0, 3.0})});
    PiecewisePoly prod = a.product(b);
    PiecewisePoly sum = a.sum(b);
    std::mt19937_64 rng(42);
    for (int i = 0; i < 50; ++i) {
        double x = (rng() >> 11) * 0x1.0p-53;
        CHECK(prod.eval(x) == doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
        CHECK(sum.eval(x) == doctest::Approx(a.eval(x) + b.eval(x)).epsilon(1e-12));
    }
}

TEST_CASE("gauss rules integrate polynomials exactly") {
    for (int n : {4, 6, 8, 10}) {
        const GaussRule& r = gauss_rule(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double acc = 0.0;
            for (std::size_t g = 0; g < r.nodes.size(); ++g)
                acc += r.weights[g] * std::pow(r.nodes[g], deg);
            double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
            CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK(gauss_points_for_degree(7) == 4);
    CHECK(gauss_points_for_degree(11) >= 6);
}

TEST_CASE("monotone inverse round trip") {
    // strictly increasing map with a piece boundary
    PiecewisePoly f({0.0, 0.5, 1.0}, {Poly({0.0, 1.0, 1.0}), Poly({0.75, 2.0, 0.0, 1.0})});
    for (double x : {0.0, 0.1, 0.45, 0.5, 0.77, 1.0}) {
        double u = f.eval(x);
        CHECK(monotone_inverse(f, u) == doctest::Approx(x).epsilon(1e-10));
    }
}
