#include "signreg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "signreg/errors.hpp"

namespace signreg {

SubspaceSpec SubspaceSpec::clamped(int endpoint) {
    SubspaceSpec s;
    s.functionals.push_back({endpoint, 1.0, 0.0});
    s.functionals.push_back({endpoint, 0.0, 1.0});
    return s;
}

std::vector<BoundaryFunctional> SubspaceSpec::at(int endpoint) const {
    std::vector<BoundaryFunctional> r;
    for (const auto& f : functionals)
        if (f.endpoint == endpoint) r.push_back(f);
    return r;
}

namespace {

void check_atoms(const GeneralizedCoefficient& c, bool allow_order1, const char* slot,
                 ValidationReport& rep) {
    for (const AtomicTerm& a : c.atoms) {
        if (a.location < 0.0 || a.location > 1.0)
            rep.issues.push_back({"AtomOutOfDomain",
                                  std::string(slot) + ": atom location outside [0,1]"});
        if (a.order != 0 && a.order != 1)
            rep.issues.push_back({"IllegalAtomOrder",
                                  std::string(slot) + ": atom order must be 0 or 1"});
        else if (a.order == 1 && !allow_order1)
            rep.issues.push_back({"IllegalAtomOrder",
                                  std::string(slot) + ": derivative atoms are not admitted"});
    }
}

}  // namespace

ValidationReport validate_problem(const Problem& problem) {
    ValidationReport rep;
    rep.canonical = problem;
    rep.canonical.q = canonicalize(problem.q);
    rep.canonical.h = canonicalize(problem.h);

    double pmin = problem.p.min_value();
    rep.canonical.p_margin = pmin;
    if (!(pmin > 0.0))
        rep.issues.push_back({"NonPositiveLeadingCoefficient",
                              "p must be uniformly positive on [0,1], found min " +
                                  std::to_string(pmin)});

    check_atoms(rep.canonical.q, /*allow_order1=*/false, "q", rep);
    check_atoms(rep.canonical.h, /*allow_order1=*/true, "h", rep);

    for (int e : {0, 1}) {
        auto fs = rep.canonical.subspace.at(e);
        if (fs.size() > 2)
            rep.issues.push_back({"DegenerateBoundaryFunctional",
                                  "more than two functionals at endpoint " + std::to_string(e)});
        for (const auto& f : fs)
            if (f.a == 0.0 && f.b == 0.0)
                rep.issues.push_back({"DegenerateBoundaryFunctional",
                                      "zero functional at endpoint " + std::to_string(e)});
        if (fs.size() == 2) {
            double det = fs[0].a * fs[1].b - fs[0].b * fs[1].a;
            double scale = std::max({std::abs(fs[0].a), std::abs(fs[0].b), std::abs(fs[1].a),
                                     std::abs(fs[1].b), 1e-300});
            if (std::abs(det) <= 1e-12 * scale * scale)
                rep.issues.push_back({"DegenerateBoundaryFunctional",
                                      "linearly dependent functionals at endpoint " +
                                          std::to_string(e)});
        }
    }
    for (const auto& f : problem.subspace.functionals)
        if (f.endpoint != 0 && f.endpoint != 1)
            rep.issues.push_back({"DegenerateBoundaryFunctional", "endpoint must be 0 or 1"});

    rep.ok = rep.issues.empty();
    return rep;
}

Problem validated(const Problem& problem) {
    ValidationReport rep = validate_problem(problem);
    if (rep.ok) return rep.canonical;
    const ValidationIssue& first = rep.issues.front();
    if (first.code == "NonPositiveLeadingCoefficient")
        throw NonPositiveLeadingCoefficient(first.message);
    if (first.code == "IllegalAtomOrder") throw IllegalAtomOrder(first.message);
    throw DegenerateBoundaryFunctional(first.message);
}

SecondOrderProblem second_order_of(const Problem& problem) {
    for (const AtomicTerm& a : problem.q.atoms)
        if (a.order != 0) throw IllegalAtomOrder("second-order form: q atoms must have order 0");
    return SecondOrderProblem{problem.p, problem.q};
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

void hash_double(std::uint64_t& h, double v) { hash_bytes(h, &v, sizeof v); }

void hash_coeff(std::uint64_t& h, const ScalarCoefficient& c) {
    int k = static_cast<int>(c.kind());
    hash_bytes(h, &k, sizeof k);
    for (double b : c.as_piecewise().breaks()) hash_double(h, b);
    for (const Poly& p : c.as_piecewise().pieces())
        for (double v : p.coeffs()) hash_double(h, v);
}

void hash_generalized(std::uint64_t& h, const GeneralizedCoefficient& c) {
    if (c.smooth) hash_coeff(h, *c.smooth);
    for (const AtomicTerm& a : c.atoms) {
        hash_double(h, a.location);
        hash_double(h, a.weight);
        hash_double(h, static_cast<double>(a.order));
    }
    if (c.gradient) hash_coeff(h, *c.gradient);
}

}  // namespace

std::uint64_t problem_hash(const Problem& problem) {
    Problem c = problem;
    c.q = canonicalize(c.q);
    c.h = canonicalize(c.h);
    std::uint64_t h = 1469598103934665603ULL;
    hash_coeff(h, c.p);
    hash_generalized(h, c.q);
    hash_generalized(h, c.h);
    for (const auto& f : c.subspace.functionals) {
        hash_double(h, static_cast<double>(f.endpoint));
        hash_double(h, f.a);
        hash_double(h, f.b);
    }
    return h;
}

}  // namespace signreg
