#include "signreg/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "signreg/errors.hpp"

namespace signreg {

double GreenKernel::max_abs() const {
    double m = 0.0;
    for (const auto& row : values)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

std::string to_string(KernelClass c) {
    switch (c) {
        case KernelClass::InteriorPositive: return "interior-positive";
        case KernelClass::ClosedUniformPositive: return "closed-uniform-positive";
        case KernelClass::SignChanging: return "sign-changing";
        case KernelClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

GreenKernel green_matrix(const Factorization& fact, std::span<const double> t_grid,
                         std::span<const double> s_grid) {
    fact.require_positive_definite();
    const Mesh& mesh = fact.op().mesh;
    GreenKernel k;
    k.t_grid.assign(t_grid.begin(), t_grid.end());
    k.s_grid.assign(s_grid.begin(), s_grid.end());
    k.mesh_elements = mesh.n_elements();
    k.problem_hash = problem_hash(fact.op().problem);
    k.values.assign(t_grid.size(), std::vector<double>(s_grid.size(), 0.0));

    std::vector<int> t_nodes;
    for (double t : t_grid) {
        int n = mesh.find_node(t);
        if (n < 0) throw PointNotOnMesh("kernel t-grid point is not a mesh node");
        t_nodes.push_back(n);
    }
    for (std::size_t j = 0; j < k.s_grid.size(); ++j) {
        FiniteElementFunction col = fact.solve(LoadSpec::delta(k.s_grid[j]));
        for (std::size_t i = 0; i < k.t_grid.size(); ++i)
            k.values[i][j] = col.value_at_node(t_nodes[i]);
    }
    return k;
}

PositivityReport positivity_report(const GreenKernel& kernel, double boundary_margin) {
    PositivityReport rep;
    rep.boundary_margin = boundary_margin;
    rep.positivity_tol = 1e-9 * kernel.max_abs();

    bool has_interior = false;
    rep.min_closed = std::numeric_limits<double>::infinity();
    rep.min_interior = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kernel.t_grid.size(); ++i)
        for (std::size_t j = 0; j < kernel.s_grid.size(); ++j) {
            const double t = kernel.t_grid[i], s = kernel.s_grid[j];
            const double v = kernel.values[i][j];
            if (v < rep.min_closed) {
                rep.min_closed = v;
                rep.argmin_closed_t = t;
                rep.argmin_closed_s = s;
            }
            const bool interior = t >= boundary_margin && t <= 1.0 - boundary_margin &&
                                  s >= boundary_margin && s <= 1.0 - boundary_margin;
            if (interior && v < rep.min_interior) {
                has_interior = true;
                rep.min_interior = v;
                rep.argmin_interior_t = t;
                rep.argmin_interior_s = s;
            }
        }
    if (!has_interior) rep.min_interior = std::numeric_limits<double>::quiet_NaN();

    const double tol = rep.positivity_tol;
    if (has_interior && rep.min_interior < -tol)
        rep.classification = KernelClass::SignChanging;
    else if (has_interior && rep.min_interior > tol)
        rep.classification = rep.min_closed > tol ? KernelClass::ClosedUniformPositive
                                                  : KernelClass::InteriorPositive;
    else
        rep.classification = KernelClass::Inconclusive;
    return rep;
}

GreenKernel restrict_kernel(const GreenKernel& kernel, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error("restriction requires 0 < eps < 1/2");
    const double tol = 1e-14;
    GreenKernel r;
    std::vector<std::size_t> ti, sj;
    for (std::size_t i = 0; i < kernel.t_grid.size(); ++i)
        if (kernel.t_grid[i] >= eps - tol && kernel.t_grid[i] <= 1.0 - eps + tol) {
            ti.push_back(i);
            r.t_grid.push_back(kernel.t_grid[i]);
        }
    for (std::size_t j = 0; j < kernel.s_grid.size(); ++j)
        if (kernel.s_grid[j] >= eps - tol && kernel.s_grid[j] <= 1.0 - eps + tol) {
            sj.push_back(j);
            r.s_grid.push_back(kernel.s_grid[j]);
        }
    if (ti.empty() || sj.empty())
        throw EmptyRestriction("no grid points inside [eps, 1-eps]");
    r.mesh_elements = kernel.mesh_elements;
    r.problem_hash = kernel.problem_hash;
    for (std::size_t i : ti) {
        std::vector<double> row;
        row.reserve(sj.size());
        for (std::size_t j : sj) row.push_back(kernel.values[i][j]);
        r.values.push_back(std::move(row));
    }
    return r;
}

void write_kernel_csv(const GreenKernel& kernel, std::ostream& os) {
    char buf[64];
    os << "t\\s";
    for (double s : kernel.s_grid) {
        std::snprintf(buf, sizeof buf, ",%.17g", s);
        os << buf;
    }
    os << "\n";
    for (std::size_t i = 0; i < kernel.t_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", kernel.t_grid[i]);
        os << buf;
        for (double v : kernel.values[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            os << buf;
        }
        os << "\n";
    }
}

}  // namespace signreg
