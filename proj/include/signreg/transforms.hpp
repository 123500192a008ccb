#pragma once

#include <optional>
#include <span>

#include "signreg/assembly.hpp"

namespace signreg {

/// Sturm weight of the second-order companion form: sigma = omega S^{-1}(d_0 + d_1)
/// normalized to unit integral, and the change of variable tau(x) = int_0^x sigma.
struct SturmWeight {
    FiniteElementFunction sigma;
    double omega = 0.0;
    PiecewisePoly tau;
    double sigma_min = 0.0;

    double tau_inverse(double u) const;  // monotone bisection to 1e-13
};

SturmWeight sturm_weight(const SecondOrderProblem& s_problem, const Mesh& mesh);

enum class TransformKind { VariableChange, Multiplier };

/// Outcome of either conjugation: the transformed problem together with the
/// weight data that produced it.
struct TransformResult {
    TransformKind kind = TransformKind::VariableChange;
    Problem transformed;
    FiniteElementFunction sigma;
    double sigma_min = 0.0;
    double omega = 0.0;  // variable change only
    double alpha = 0.0;
    double beta = 0.0;   // variable change only
    double gamma = 0.0;  // variable change only
    std::optional<PiecewisePoly> tau;
};

/// Sturm change of variable: p_hat o tau = p sigma^3, endpoint atoms
/// beta = omega sigma(0), gamma = omega sigma(1); requires h = alpha d_0 with
/// alpha > 0 and no essential constraints. p_hat is materialized as a sampled
/// coefficient on a fine grid (8x the mesh) since tau has no closed inverse.
TransformResult variable_change(const SturmWeight& weight, const Problem& problem);

/// sigma = L^{-1} d_0 for an unconstrained positive-definite operator; the
/// multiplier hypothesis needs it uniformly positive.
FiniteElementFunction multiplier_weight(const Factorization& fact);

/// Multiplier conjugation: p_hat = p sigma^2, alpha = sigma(0), and
/// <q_hat, w> = <q, sigma^2 w> + int 2p[2(sigma')^2 - sigma sigma''] w dx
///            + int p (sigma^2)' w' dx.
TransformResult multiplier_transform(const FiniteElementFunction& sigma,
                                     const Problem& problem);

/// Max over probes of |<L Vy, Vy> - <L_hat y, y>| / scale, with Vy the
/// composed (variable change) or multiplied (multiplier) probe interpolated
/// onto a refined mesh of the original operator.
double verify_conjugation(const DiscreteOperator& original, const TransformResult& transform,
                          std::span<const FiniteElementFunction> probes);

/// Deterministic cubic probe set on a mesh (exactly representable at every
/// refinement level).
std::vector<FiniteElementFunction> conjugation_probes(const Mesh& mesh);

}  // namespace signreg
