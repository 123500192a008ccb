#include "signreg/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "signreg/errors.hpp"

namespace signreg {

std::string to_string(ChaseQuantity q) {
    switch (q) {
        case ChaseQuantity::Solution: return "y";
        case ChaseQuantity::FirstDerivative: return "y'";
        case ChaseQuantity::Moment: return "py''";
        case ChaseQuantity::MomentDerivative: return "(py'')'";
        case ChaseQuantity::Load: return "f";
    }
    return "?";
}

bool is_proposition11_shape(const Problem& problem) {
    if (!problem.subspace.functionals.empty()) return false;
    GeneralizedCoefficient q = canonicalize(problem.q);
    GeneralizedCoefficient h = canonicalize(problem.h);
    if (q.smooth || q.gradient || h.smooth || h.gradient) return false;
    if (q.atoms.size() != 2 || h.atoms.size() != 1) return false;
    const auto& b = q.atoms[0];
    const auto& g = q.atoms[1];
    const auto& a = h.atoms[0];
    return b.location == 0.0 && b.order == 0 && b.weight > 0.0 &&  //
           g.location == 1.0 && g.order == 0 && g.weight > 0.0 &&  //
           a.location == 0.0 && a.order == 0 && a.weight > 0.0 &&  //
           problem.p.min_value() > 0.0;
}

namespace {

class Chase {
public:
    Chase(const Problem& problem, const FiniteElementFunction& y, const SampledFunction& f)
        : problem_(problem), y_(y), f_(f) {
        build_scan_grid();
        for (auto q : {ChaseQuantity::Solution, ChaseQuantity::FirstDerivative,
                       ChaseQuantity::Moment, ChaseQuantity::MomentDerivative,
                       ChaseQuantity::Load})
            scale_[idx(q)] = scan_scale(q);
    }

    double eval(ChaseQuantity q, double x, Side side) const {
        switch (q) {
            case ChaseQuantity::Solution: return y_.evaluate(x, 0, side);
            case ChaseQuantity::FirstDerivative: return y_.evaluate(x, 1, side);
            case ChaseQuantity::Moment: return problem_.p.eval(x) * y_.evaluate(x, 2, side);
            case ChaseQuantity::MomentDerivative:
                return problem_.p.eval_derivative(x, side) * y_.evaluate(x, 2, side) +
                       problem_.p.eval(x) * y_.evaluate(x, 3, side);
            case ChaseQuantity::Load: return f_.eval(x);
        }
        return 0.0;
    }

    double scale(ChaseQuantity q) const { return scale_[idx(q)]; }

    Certificate run(double cert_tol) {
        Certificate cert;
        cert.cert_tol = cert_tol;
        tol_ = cert_tol;
        find_sign_points(cert);
        const int n = cert.n;
        if (n == 0) return cert;
        const auto& xi = cert.y_points;

        // level 1: mean-value points of y' between consecutive sign points
        std::vector<double> xi1(n + 1, 0.0);  // index k stored at xi1[k]
        for (int k = 1; k <= n; ++k)
            xi1[k] = locate(cert, 1, k, xi[k - 1], xi[k], ChaseQuantity::FirstDerivative,
                            ChaseQuantity::Solution, xi[k], +1);

        // boundary branch at the left end
        int m = 0;
        double p0 = found_or_nan(xi[0], 0.0, ChaseQuantity::FirstDerivative,
                                 ChaseQuantity::Solution, xi[0], +1);
        if (!std::isnan(p0)) {
            xi1[0] = p0;
            record(cert, 1, 0, ChaseQuantity::FirstDerivative, p0, Side::Right,
                   ChaseQuantity::Solution, xi[0], Side::Right, +1);
        } else {
            m = 1;
            check_fixed(cert, 0, -1, ChaseQuantity::MomentDerivative, 0.0, Side::Right,
                        ChaseQuantity::Solution, xi[0], Side::Right, -1,
                        "boundary branch: (py'')'(0) y(xi_1) < 0");
        }
        cert.m = m;
        for (int k = m; k <= n; ++k) cert.chain1.emplace_back(k, xi1[k]);

        // level 2: sign points of py'' (indices m-1 .. n)
        std::vector<double> xi2(n + 2, 0.0);  // xi2[k + 1] holds index k
        auto X2 = [&xi2](int k) -> double& { return xi2[k + 1]; };
        for (int k = m; k <= n - 1; ++k)
            X2(k) = locate(cert, 2, k, xi1[k], xi1[k + 1], ChaseQuantity::Moment,
                           ChaseQuantity::FirstDerivative, xi1[k + 1], +1);
        X2(m - 1) = locate(cert, 2, m - 1, 0.0, xi1[m], ChaseQuantity::Moment,
                           ChaseQuantity::FirstDerivative, xi1[m], +1);
        X2(n) = locate(cert, 2, n, xi1[n], 1.0, ChaseQuantity::Moment,
                       ChaseQuantity::FirstDerivative, xi1[n], -1);
        for (int k = m - 1; k <= n; ++k) cert.chain2.emplace_back(k, X2(k));

        // level 3: sign points of (py'')' (indices -1 .. n-1)
        std::vector<double> xi3(n + 1, 0.0);
        auto X3 = [&xi3](int k) -> double& { return xi3[k + 1]; };
        for (int k = m - 1; k <= n - 1; ++k)
            X3(k) = locate(cert, 3, k, X2(k), X2(k + 1), ChaseQuantity::MomentDerivative,
                           ChaseQuantity::Moment, X2(k + 1), +1);
        if (m == 1) {
            // (py'')(xi_{2,0}) y(xi_1) < 0 must already hold, then the
            // boundary sign of (py'')' yields the missing point near 0
            check_fixed(cert, 0, -1, ChaseQuantity::Moment, X2(0), Side::Right,
                        ChaseQuantity::Solution, xi[0], Side::Right, -1,
                        "m=1: (py'')(xi_20) y(xi_1) < 0");
            X3(-1) = locate(cert, 3, -1, 0.0, X2(0), ChaseQuantity::MomentDerivative,
                            ChaseQuantity::Moment, X2(0), +1);
        }
        for (int k = -1; k <= n - 1; ++k) cert.chain3.emplace_back(k, X3(k));

        // level 4: sign points of the load (indices -1 .. n-1)
        for (int k = -1; k <= n - 2; ++k) {
            double x = locate(cert, 4, k, X3(k), X3(k + 1), ChaseQuantity::Load,
                              ChaseQuantity::MomentDerivative, X3(k + 1), +1);
            cert.chain4.emplace_back(k, x);
        }
        double xlast = locate(cert, 4, n - 1, X3(n - 1), 1.0, ChaseQuantity::Load,
                              ChaseQuantity::MomentDerivative, X3(n - 1), -1);
        cert.chain4.emplace_back(n - 1, xlast);
        return cert;
    }

private:
    static int idx(ChaseQuantity q) { return static_cast<int>(q); }

    void build_scan_grid() {
        const Mesh& mesh = y_.mesh();
        const int per_element = 12;
        for (int e = 0; e < mesh.n_elements(); ++e)
            for (int k = 0; k < per_element; ++k)
                scan_.push_back(mesh.nodes[e] + mesh.length(e) * (k + 0.5) / per_element);
    }

    double scan_scale(ChaseQuantity q) const {
        double m = 0.0;
        for (double x : scan_) m = std::max(m, std::abs(eval(q, x, Side::Right)));
        return m;
    }

    void find_sign_points(Certificate& cert) const {
        std::vector<double> vals;
        vals.reserve(scan_.size());
        for (double x : scan_) vals.push_back(y_.evaluate(x));
        double tol = default_zero_tol(vals);
        // one representative per run of constant sign: the largest sample
        int prev = 0;
        double best = 0.0, best_x = 0.0;
        auto flush = [&] {
            if (prev != 0) cert.y_points.push_back(best_x);
        };
        for (std::size_t i = 0; i < vals.size(); ++i) {
            int s = vals[i] > tol ? 1 : (vals[i] < -tol ? -1 : 0);
            if (s == 0) continue;
            if (s != prev) {
                flush();
                prev = s;
                best = 0.0;
            }
            if (std::abs(vals[i]) > best) {
                best = std::abs(vals[i]);
                best_x = scan_[i];
            }
        }
        flush();
        cert.n = std::max(0, static_cast<int>(cert.y_points.size()) - 1);
    }

    double margin_for(ChaseQuantity a, ChaseQuantity b) const {
        return tol_ * scale(a) * scale(b);
    }

    // best point in (lo, hi) where sign * q1 * partner_value exceeds the
    // margin; NaN when the grid cannot witness it
    double search(double lo, double hi, ChaseQuantity q1, double partner_value,
                  int sign, double margin, double* value_out) const {
        const int coarse = 48;
        double best = -1.0, best_x = std::numeric_limits<double>::quiet_NaN();
        double best_val = 0.0;
        auto consider = [&](double x) {
            if (!(x > lo && x < hi)) return;
            double v = eval(q1, x, Side::Right);
            double score = sign * v * partner_value;
            if (score > best) {
                best = score;
                best_x = x;
                best_val = v;
            }
        };
        for (int i = 0; i < coarse; ++i) consider(lo + (hi - lo) * (i + 0.5) / coarse);
        // include scan-grid points inside the interval (element-aware density)
        auto it = std::lower_bound(scan_.begin(), scan_.end(), lo);
        for (; it != scan_.end() && *it < hi; ++it) consider(*it);
        if (!(best > margin)) return std::numeric_limits<double>::quiet_NaN();
        if (value_out) *value_out = best_val;
        return best_x;
    }

    double found_or_nan(double hi_exclusive, double lo, ChaseQuantity q1, ChaseQuantity q2,
                        double partner_x, int sign) const {
        double partner = eval(q2, partner_x, Side::Right);
        double v = 0.0;
        return search(lo, hi_exclusive, q1, partner, sign, margin_for(q1, q2), &v);
    }

    double locate(Certificate& cert, int level, int k, double lo, double hi, ChaseQuantity q1,
                  ChaseQuantity q2, double partner_x, int sign) {
        double partner = eval(q2, partner_x, Side::Right);
        double v = 0.0;
        double x = search(lo, hi, q1, partner, sign, margin_for(q1, q2), &v);
        if (std::isnan(x))
            throw ChainSearchFailed("level " + std::to_string(level) + ", k = " +
                                    std::to_string(k) + ": no strict sign point in (" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + ")");
        record(cert, level, k, q1, x, Side::Right, q2, partner_x, Side::Right, sign);
        return x;
    }

    void record(Certificate& cert, int level, int k, ChaseQuantity q1, double x1, Side s1,
                ChaseQuantity q2, double x2, Side s2, int sign) const {
        CertEntry e;
        e.level = level;
        e.k = k;
        e.q1 = q1;
        e.x1 = x1;
        e.side1 = s1;
        e.value1 = eval(q1, x1, s1);
        e.q2 = q2;
        e.x2 = x2;
        e.side2 = s2;
        e.value2 = eval(q2, x2, s2);
        e.required_sign = sign;
        cert.entries.push_back(e);
    }

    void check_fixed(Certificate& cert, int level, int k, ChaseQuantity q1, double x1, Side s1,
                     ChaseQuantity q2, double x2, Side s2, int sign, const char* what) {
        double v1 = eval(q1, x1, s1), v2 = eval(q2, x2, s2);
        if (!(sign * v1 * v2 > margin_for(q1, q2)))
            throw ChainSearchFailed(std::string(what) + " is not strict at this mesh");
        record(cert, level, k, q1, x1, s1, q2, x2, s2, sign);
    }

    const Problem& problem_;
    const FiniteElementFunction& y_;
    const SampledFunction& f_;
    std::vector<double> scan_;
    double scale_[5] = {0, 0, 0, 0, 0};
    double tol_ = 1e-9;
};

}  // namespace

CertificateResult sign_chain_certificate(const Factorization& fact, const SampledFunction& f,
                                         int max_refinements) {
    const Problem& problem = fact.op().problem;
    if (!is_proposition11_shape(problem))
        throw NotProposition11Shape(
            "certificate requires p > 0, q = b d_0 + g d_1, h = a d_0, no constraints");
    fact.require_positive_definite();

    Mesh mesh = fact.op().mesh;
    const Factorization* current = &fact;
    std::optional<Factorization> refactored;
    for (int attempt = 0;; ++attempt) {
        FiniteElementFunction y = current->solve(LoadSpec::density(f.to_coefficient()));
        try {
            Chase chase(problem, y, f);
            Certificate cert = chase.run(1e-9);
            return CertificateResult{std::move(cert), std::move(y), attempt};
        } catch (const ChainSearchFailed&) {
            if (attempt >= max_refinements) throw;
            mesh = mesh.refined();
            refactored.emplace(factorize(assemble(problem, mesh)));
            refactored->require_positive_definite();
            current = &*refactored;
        }
    }
}

CertificateCheck validate_certificate(const Certificate& cert, const Problem& problem,
                                      const FiniteElementFunction& y,
                                      const SampledFunction& f) {
    CertificateCheck check;
    check.min_margin = std::numeric_limits<double>::infinity();
    Chase chase(problem, y, f);

    auto fail = [&check](const std::string& msg) {
        check.valid = false;
        if (!check.detail.empty()) check.detail += "; ";
        check.detail += msg;
    };

    // re-evaluate every inequality from scratch
    for (const CertEntry& e : cert.entries) {
        double v1 = chase.eval(e.q1, e.x1, e.side1);
        double v2 = chase.eval(e.q2, e.x2, e.side2);
        double denom = chase.scale(e.q1) * chase.scale(e.q2);
        double margin = denom > 0.0 ? e.required_sign * v1 * v2 / denom : 0.0;
        check.min_margin = std::min(check.min_margin, margin);
        if (!(margin > cert.cert_tol))
            fail("level " + std::to_string(e.level) + " k=" + std::to_string(e.k) +
                 " inequality not strict");
    }

    // the claimed sign alternation of y at its witness points
    for (std::size_t i = 0; i + 1 < cert.y_points.size(); ++i) {
        if (!(cert.y_points[i] < cert.y_points[i + 1])) fail("y points out of order");
        double a = y.evaluate(cert.y_points[i]);
        double b = y.evaluate(cert.y_points[i + 1]);
        if (!(a * b < 0.0)) fail("y does not alternate at its witness points");
    }

    auto chain_x = [](const std::vector<std::pair<int, double>>& chain, int k) {
        for (const auto& [kk, x] : chain)
            if (kk == k) return x;
        return std::numeric_limits<double>::quiet_NaN();
    };
    auto in = [&fail](double x, double lo, double hi, const char* what) {
        if (!(lo < x && x < hi)) fail(std::string(what) + " breaks the interleaving");
    };

    const int n = cert.n, m = cert.m;
    if (n > 0) {
        for (int k = std::max(1, m); k <= n; ++k)
            in(chain_x(cert.chain1, k), k == 0 ? 0.0 : cert.y_points[k - 1], cert.y_points[k],
               "chain1");
        if (m == 0) in(chain_x(cert.chain1, 0), 0.0, cert.y_points[0], "chain1[0]");
        for (int k = m; k <= n - 1; ++k)
            in(chain_x(cert.chain2, k), chain_x(cert.chain1, k), chain_x(cert.chain1, k + 1),
               "chain2");
        in(chain_x(cert.chain2, m - 1), 0.0, chain_x(cert.chain1, m), "chain2 left");
        in(chain_x(cert.chain2, n), chain_x(cert.chain1, n), 1.0, "chain2 right");
        for (int k = m - 1; k <= n - 1; ++k)
            in(chain_x(cert.chain3, k), chain_x(cert.chain2, k), chain_x(cert.chain2, k + 1),
               "chain3");
        if (m == 1) in(chain_x(cert.chain3, -1), 0.0, chain_x(cert.chain2, 0), "chain3[-1]");
        for (int k = -1; k <= n - 2; ++k)
            in(chain_x(cert.chain4, k), chain_x(cert.chain3, k), chain_x(cert.chain3, k + 1),
               "chain4");
        in(chain_x(cert.chain4, n - 1), chain_x(cert.chain3, n - 1), 1.0, "chain4 last");

        // the load alternates along chain4, so S^-(f) >= n
        int prev = 0;
        for (const auto& [k, x] : cert.chain4) {
            double v = f.eval(x);
            int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
            if (s == 0) fail("load vanishes at a chain4 point");
            if (prev != 0 && s == prev) fail("load does not alternate along chain4");
            prev = s;
        }
    }
    if (cert.entries.empty() && n > 0) fail("nonempty chase has no recorded inequalities");
    if (check.valid && cert.entries.empty()) check.min_margin = 0.0;
    return check;
}

}  // namespace signreg
