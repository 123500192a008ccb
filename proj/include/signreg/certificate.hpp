#pragma once

#include <string>
#include <utility>
#include <vector>

#include "signreg/signs.hpp"

namespace signreg {

/// Quantities chased through the interlacing argument.
enum class ChaseQuantity { Solution, FirstDerivative, Moment, MomentDerivative, Load };
std::string to_string(ChaseQuantity q);

/// One recorded strict inequality: required_sign * value1 * value2 > 0 with
/// margin above cert_tol times the quantity scales.
struct CertEntry {
    int level = 0;  // 1..4, or 0 for the m-branch boundary inequality
    int k = 0;
    ChaseQuantity q1 = ChaseQuantity::Solution;
    double x1 = 0.0;
    Side side1 = Side::Right;
    double value1 = 0.0;
    ChaseQuantity q2 = ChaseQuantity::Solution;
    double x2 = 0.0;
    Side side2 = Side::Right;
    double value2 = 0.0;
    int required_sign = 1;
};

/// The four interlacing point chains extracted from the solution, including
/// the boundary-generated members and the case flag m.
struct Certificate {
    int n = 0;  // sign changes of y witnessed by y_points
    int m = 0;  // 0: a first-derivative point exists left of xi_1; 1: boundary branch
    std::vector<double> y_points;                     // xi_1 .. xi_{n+1}
    std::vector<std::pair<int, double>> chain1;       // sign points of y'
    std::vector<std::pair<int, double>> chain2;       // of p y''
    std::vector<std::pair<int, double>> chain3;       // of (p y'')'
    std::vector<std::pair<int, double>> chain4;       // of the load
    std::vector<CertEntry> entries;
    double cert_tol = 1e-9;
};

struct CertificateResult {
    Certificate certificate;
    FiniteElementFunction solution;
    int refinements = 0;
};

/// Runs the constructive chase on y = L^{-1} f for an operator of the
/// Proposition-1.1 shape (p uniformly positive, q = b d_0 + g d_1,
/// h = a d_0, all weights positive, no essential constraints).
/// A grid too coarse to witness some strict inequality triggers automatic
/// dyadic refinement, up to max_refinements, before ChainSearchFailed
/// surfaces.
CertificateResult sign_chain_certificate(const Factorization& fact, const SampledFunction& f,
                                         int max_refinements = 3);

struct CertificateCheck {
    bool valid = true;
    double min_margin = 0.0;  // smallest normalized inequality margin
    std::string detail;
};

/// Independent re-evaluation of every recorded inequality and of the chain
/// interleaving; uses only the solution, the load, and p.
CertificateCheck validate_certificate(const Certificate& cert, const Problem& problem,
                                      const FiniteElementFunction& y,
                                      const SampledFunction& f);

/// True when the problem matches the Proposition-1.1 hypothesis.
bool is_proposition11_shape(const Problem& problem);

}  // namespace signreg
