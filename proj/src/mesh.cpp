#include "signreg/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "signreg/errors.hpp"

namespace signreg {

int Mesh::find_node(double x, double tol) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x - tol);
    if (it != nodes.end() && std::abs(*it - x) <= tol)
        return static_cast<int>(it - nodes.begin());
    return -1;
}

int Mesh::element_of(double x, Side side) const {
    const double tol = 1e-12;
    if (x < nodes.front() - tol || x > nodes.back() + tol)
        throw OutOfDomain("point outside mesh domain");
    x = std::clamp(x, nodes.front(), nodes.back());
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int e = static_cast<int>(it - nodes.begin()) - 1;
    e = std::clamp(e, 0, n_elements() - 1);
    int node = find_node(x, tol);
    if (side == Side::Left && node > 0 && e == node) --e;
    return e;
}

Mesh Mesh::refined() const {
    Mesh m;
    m.nodes.reserve(nodes.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        m.nodes.push_back(nodes[i]);
        m.nodes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    m.nodes.push_back(nodes.back());
    return m;
}

Mesh build_mesh(std::span<const double> required_points, int n_elements,
                std::span<const double> extra) {
    if (n_elements < 2) throw Error("build_mesh: need at least 2 elements");
    std::vector<double> nodes;
    nodes.reserve(n_elements + 1 + required_points.size() + extra.size());
    for (int i = 0; i <= n_elements; ++i)
        nodes.push_back(static_cast<double>(i) / n_elements);

    auto insert = [&nodes](double x) {
        if (x < 0.0 || x > 1.0) throw OutOfDomain("mesh point outside [0,1]");
        auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
        // snap to an existing node rather than creating a sliver element
        for (auto c : {it, it == nodes.begin() ? it : std::prev(it)}) {
            if (c != nodes.end() && std::abs(*c - x) <= 1e-12) {
                *c = x;
                return;
            }
        }
        nodes.insert(it, x);
    };
    for (double x : required_points) insert(x);
    for (double x : extra) insert(x);

    Mesh m;
    m.nodes = std::move(nodes);
    return m;
}

Mesh build_mesh(const Problem& problem, int n_elements, std::span<const double> extra) {
    std::vector<double> required;
    for (const AtomicTerm& a : problem.q.atoms) required.push_back(a.location);
    for (const AtomicTerm& a : problem.h.atoms) required.push_back(a.location);
    return build_mesh(required, n_elements, extra);
}

}  // namespace signreg
