#pragma once

#include <span>
#include <vector>

#include "signreg/problem.hpp"

namespace signreg {

/// Partition of [0, 1]; atom locations of the governing problem are nodes.
struct Mesh {
    std::vector<double> nodes;

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return static_cast<int>(nodes.size()) - 1; }
    double length(int element) const { return nodes[element + 1] - nodes[element]; }

    /// Index of the node matching x to within tol, or -1.
    int find_node(double x, double tol = 1e-12) const;
    /// Element containing x; at interior nodes the side picks the element.
    int element_of(double x, Side side = Side::Right) const;
    /// Every element split in two.
    Mesh refined() const;
};

/// Quasi-uniform mesh with n_elements pieces, refined so that every atom
/// location of the problem and every extra point is a node.
Mesh build_mesh(const Problem& problem, int n_elements, std::span<const double> extra = {});
Mesh build_mesh(std::span<const double> required_points, int n_elements,
                std::span<const double> extra = {});

}  // namespace signreg
