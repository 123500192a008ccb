#pragma once

#include <memory>
#include <optional>

#include "signreg/band.hpp"
#include "signreg/hermite.hpp"
#include "signreg/mesh.hpp"
#include "signreg/problem.hpp"

namespace signreg {

/// Change-of-basis data eliminating the essential boundary constraints.
/// Full dof i is the combination sum_k coeff * reduced dof; an empty row pins
/// the dof to zero. Only endpoint dofs differ from the identity, so the
/// reduced matrix keeps the Hermite band structure.
struct ConstraintMap {
    int n_full = 0;
    int n_reduced = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;  // full -> reduced

    std::vector<double> expand(const std::vector<double>& reduced) const;
    std::vector<double> reduce(const std::vector<double>& full) const;  // T^T * full
};

ConstraintMap make_constraint_map(const SubspaceSpec& subspace, int n_nodes);

/// Which slot of the quadratic form a generalized coefficient occupies:
/// QSlot pairs with y'z', HSlot with yz.
enum class FormSlot { QSlot, HSlot };

/// Constrained symmetric stiffness matrix of the fourth-order form on a mesh.
struct DiscreteOperator {
    Problem problem;  // canonical
    Mesh mesh;
    ConstraintMap constraints;
    SymBandMatrix stiffness;  // on reduced dofs

    int n_reduced() const { return constraints.n_reduced; }
    /// Value of the quadratic form at a function satisfying the constraints.
    double quadratic_form(const FiniteElementFunction& u) const;
};

/// Assemble the fourth-order form. The mesh must contain every atom location.
DiscreteOperator assemble(const Problem& problem, const Mesh& mesh);

/// Assemble the second-order companion form on the same C^1 cubic space
/// (conforming for W_2^1); no essential constraints.
DiscreteOperator assemble(const SecondOrderProblem& problem, const Mesh& mesh);

/// Unconstrained matrix of a single coefficient term; used by the transform
/// verification paths and tests.
SymBandMatrix assemble_coefficient_matrix(const GeneralizedCoefficient& coeff, const Mesh& mesh,
                                          FormSlot slot);

/// Right-hand side: point functionals at mesh nodes plus integrable densities.
/// A point term of order 0 acts as w * phi(location), order 1 as
/// -w * phi'(location).
struct PointTerm {
    double location = 0.0;
    double weight = 1.0;
    int order = 0;
};
struct LoadSpec {
    std::vector<PointTerm> points;
    std::vector<ScalarCoefficient> densities;
    std::vector<PiecewisePoly> raw_densities;  // arbitrary-support piecewise data

    static LoadSpec delta(double s, double weight = 1.0) { return {{{s, weight, 0}}, {}, {}}; }
    static LoadSpec density(ScalarCoefficient c) { return {{}, {std::move(c)}, {}}; }
};

/// Symmetric factorization of the constrained stiffness matrix.
class Factorization {
public:
    Factorization(std::shared_ptr<const DiscreteOperator> op, BandLDLT ldlt)
        : op_(std::move(op)), ldlt_(std::move(ldlt)) {}

    bool positive_definite() const { return ldlt_.positive_definite(); }
    double min_pivot() const { return ldlt_.min_pivot(); }
    double pivot_tolerance() const { return ldlt_.pivot_tolerance(); }
    const DiscreteOperator& op() const { return *op_; }

    void require_positive_definite() const;

    /// Galerkin solution for the given load. One step of iterative
    /// refinement keeps the linear-system residual at roundoff level.
    FiniteElementFunction solve(const LoadSpec& load) const;

    /// Relative residual ||Kx - b|| / (||K|| ||x|| + ||b||) of the last check.
    double solve_residual(const LoadSpec& load, const FiniteElementFunction& u) const;

private:
    std::vector<double> solve_reduced(const std::vector<double>& rhs) const;
    std::shared_ptr<const DiscreteOperator> op_;
    BandLDLT ldlt_;
};

/// Factor the operator; the positive-definiteness verdict is recorded, not
/// thrown, so callers can report it.
Factorization factorize(const DiscreteOperator& op, double pivot_tol_rel = 1e-12);
Factorization factorize(std::shared_ptr<const DiscreteOperator> op,
                        double pivot_tol_rel = 1e-12);

/// Load vector in full dof numbering.
std::vector<double> assemble_load(const LoadSpec& load, const Mesh& mesh);

}  // namespace signreg
