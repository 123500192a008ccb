#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "signreg/errors.hpp"
#include "signreg/green.hpp"

#include "oracles.hpp"

using namespace signreg;

namespace {

Problem cantilever() {
    Problem p;
    p.subspace = SubspaceSpec::clamped_left();
    return p;
}

Factorization make_fact(const Problem& p, int n, std::vector<double> extra) {
    Mesh m = build_mesh(p, n, extra);
    return factorize(assemble(p, m));
}

}  // namespace

TEST_CASE("cantilever kernel matches the closed form") {
    std::vector<double> grid{0.25, 0.5, 0.75, 1.0};
    Factorization fact = make_fact(cantilever(), 16, grid);
    GreenKernel k = green_matrix(fact, grid, grid);
    CHECK(k.value(1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-10));
    CHECK(k.value(0, 2) == doctest::Approx(1.0 / 48.0).epsilon(1e-10));
    CHECK(k.value(2, 0) == doctest::Approx(1.0 / 48.0).epsilon(1e-10));
    CHECK(k.value(3, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            CHECK(k.value(i, j) ==
                  doctest::Approx(oracles::cantilever_green(grid[i], grid[j])).epsilon(1e-10));
}

TEST_CASE("clamped boundary rows vanish without disturbing the verdict") {
    std::vector<double> grid{0.0, 0.25, 0.5, 0.75};
    Factorization fact = make_fact(cantilever(), 16, grid);
    GreenKernel k = green_matrix(fact, grid, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) CHECK(k.value(0, j) == 0.0);
    PositivityReport rep = positivity_report(k);
    CHECK(rep.classification == KernelClass::InteriorPositive);
    CHECK(rep.min_closed == 0.0);
    CHECK(rep.min_interior > 0.0);
}

TEST_CASE("kernel symmetry, reproducibility, superposition") {
    std::vector<double> grid{0.125, 0.25, 0.5, 0.625, 0.875};
    Factorization fact = make_fact(cantilever(), 16, grid);
    GreenKernel a = green_matrix(fact, grid, grid);
    GreenKernel b = green_matrix(fact, grid, grid);

    double maxg = a.max_abs();
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            CHECK(std::abs(a.value(i, j) - a.value(j, i)) <= 1e-10 * maxg);
            CHECK(a.value(i, j) == b.value(i, j));  // bit-identical rerun
        }

    // f = sum c_j delta_{s_j} against G * c
    std::vector<double> c{0.7, -1.3, 0.4, 2.0, -0.6};
    LoadSpec combo;
    for (std::size_t j = 0; j < grid.size(); ++j) combo.points.push_back({grid[j], c[j], 0});
    FiniteElementFunction y = fact.solve(combo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double expect = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) expect += a.value(i, j) * c[j];
        CHECK(y.evaluate(grid[i]) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("kernel entries are stable under refinement in the exact regime") {
    std::vector<double> grid{0.25, 0.5, 0.75};
    GreenKernel k16 = green_matrix(make_fact(cantilever(), 16, grid), grid, grid);
    GreenKernel k32 = green_matrix(make_fact(cantilever(), 32, grid), grid, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            CHECK(std::abs(k16.value(i, j) - k32.value(i, j)) <= 1e-10);
}

TEST_CASE("stiff foundation kernel changes sign and the oracle agrees") {
    Problem p = cantilever();
    p.h.smooth = ScalarCoefficient::constant(2000.0);
    std::vector<double> grid;
    for (int i = 1; i <= 24; ++i) grid.push_back(i / 25.0);
    Factorization fact = make_fact(p, 64, grid);
    CHECK(fact.positive_definite());
    GreenKernel k = green_matrix(fact, grid, grid);
    PositivityReport rep = positivity_report(k);
    CHECK(rep.classification == KernelClass::SignChanging);
    CHECK(rep.min_interior < 0.0);

    // independent finite-difference solve at 10x resolution
    std::vector<double> col =
        oracles::fd_foundation_column(2000.0, 640, rep.argmin_interior_s);
    int it = static_cast<int>(std::lround(rep.argmin_interior_t * 640));
    CHECK(col[it] < 0.0);
}

TEST_CASE("restriction clips grids and keeps values") {
    std::vector<double> grid{0.125, 0.25, 0.5, 0.75, 0.875};
    Factorization fact = make_fact(cantilever(), 16, grid);
    GreenKernel k = green_matrix(fact, grid, grid);

    GreenKernel r = restrict_kernel(k, 0.25);
    REQUIRE(r.t_grid == std::vector<double>({0.25, 0.5, 0.75}));
    REQUIRE(r.s_grid == std::vector<double>({0.25, 0.5, 0.75}));
    CHECK(r.value(0, 0) == k.value(1, 1));
    CHECK(r.value(2, 1) == k.value(3, 2));

    // restrict-then-restrict with a larger eps equals the single restriction
    GreenKernel r2 = restrict_kernel(restrict_kernel(k, 0.2), 0.25);
    REQUIRE(r2.t_grid == r.t_grid);
    for (std::size_t i = 0; i < r.t_grid.size(); ++i)
        for (std::size_t j = 0; j < r.s_grid.size(); ++j)
            CHECK(r2.value(i, j) == r.value(i, j));

    // uniform positivity on the closed sub-square
    for (const auto& row : r.values)
        for (double v : row) CHECK(v > 0.0);

    std::vector<double> sparse{0.125, 0.875};
    GreenKernel ks = green_matrix(make_fact(cantilever(), 16, sparse), sparse, sparse);
    CHECK_THROWS_AS(restrict_kernel(ks, 0.3), EmptyRestriction);
    CHECK_THROWS_AS(restrict_kernel(k, 0.7), Error);
}

TEST_CASE("kernel csv format") {
    std::vector<double> grid{0.5, 1.0};
    Factorization fact = make_fact(cantilever(), 8, grid);
    GreenKernel k = green_matrix(fact, grid, grid);
    std::ostringstream os;
    write_kernel_csv(k, os);
    std::string text = os.str();
    CHECK(text.substr(0, 4) == "t\\s,");
    CHECK(text.find("0.5") != std::string::npos);
}
