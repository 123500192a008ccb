#include "signreg/signs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "signreg/errors.hpp"

namespace signreg {

double SampledFunction::eval(double x) const {
    if (points.size() < 2) throw Error("sampled function needs at least 2 points");
    if (x <= points.front()) return values.front();
    if (x >= points.back()) return values.back();
    auto it = std::upper_bound(points.begin(), points.end(), x);
    std::size_t i = static_cast<std::size_t>(it - points.begin()) - 1;
    double t = (x - points[i]) / (points[i + 1] - points[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

double SampledFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

ScalarCoefficient SampledFunction::to_coefficient() const {
    std::vector<double> x = points, v = values;
    if (x.front() != 0.0) {
        x.insert(x.begin(), 0.0);
        v.insert(v.begin(), v.front());
    }
    if (x.back() != 1.0) {
        x.push_back(1.0);
        v.push_back(v.back());
    }
    return ScalarCoefficient::sampled(std::move(x), std::move(v));
}

SignCount sign_changes(std::span<const double> points, std::span<const double> values,
                       double zero_tol) {
    SignCount r;
    int prev = 0;
    double prev_point = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        int s = values[i] > zero_tol ? 1 : (values[i] < -zero_tol ? -1 : 0);
        if (s == 0) continue;
        if (any && s != prev) {
            ++r.changes;
            r.alternations.emplace_back(prev_point, points[i]);
        }
        prev = s;
        prev_point = points[i];
        any = true;
    }
    r.all_zero = !any;
    return r;
}

SignCount sign_changes(const SampledFunction& f, double zero_tol) {
    return sign_changes(f.points, f.values, zero_tol);
}

double default_zero_tol(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return 1e-11 * m;
}

namespace {

// portable uniform double in [0, 1) from a standard engine
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

SampledFunction random_sign_pattern(int n, std::uint64_t seed) {
    if (n < 0) throw Error("random_sign_pattern: n must be nonnegative");
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL);

    std::vector<double> crossings(n);
    for (;;) {
        for (int i = 0; i < n; ++i) crossings[i] = uniform01(rng);
        std::sort(crossings.begin(), crossings.end());
        double gap = 1.0;
        double prev = 0.0;
        for (double c : crossings) {
            gap = std::min(gap, c - prev);
            prev = c;
        }
        gap = std::min(gap, 1.0 - prev);
        if (n == 0 || gap > 1e-3) break;  // redraw pathologically tight patterns
    }

    SampledFunction f;
    auto push = [&f](double x, double v) {
        f.points.push_back(x);
        f.values.push_back(v);
    };
    auto amplitude = [&rng] { return 0.3 + 0.7 * uniform01(rng); };

    double sign = 1.0;  // first lobe positive, so n = 0 yields a positive function
    push(0.0, sign * amplitude());
    for (int k = 0; k < n; ++k) {
        push(crossings[k], 0.0);
        sign = -sign;
        double peak_at = k + 1 < n ? 0.5 * (crossings[k] + crossings[k + 1])
                                   : 0.5 * (crossings[k] + 1.0);
        if (k + 1 < n || peak_at < 1.0 - 1e-9) push(peak_at, sign * amplitude());
    }
    if (f.points.back() < 1.0) push(1.0, sign * amplitude());

    double m = f.max_abs();
    for (double& v : f.values) v /= m;
    return f;
}

std::vector<double> default_eval_grid(const Mesh& mesh) {
    std::vector<double> g;
    g.reserve(2 * mesh.nodes.size());
    for (std::size_t i = 0; i + 1 < mesh.nodes.size(); ++i) {
        g.push_back(mesh.nodes[i]);
        g.push_back(0.5 * (mesh.nodes[i] + mesh.nodes[i + 1]));
    }
    g.push_back(mesh.nodes.back());
    return g;
}

NondecreaseReport verify_nondecrease(const Factorization& fact, const SampledFunction& f,
                                     std::span<const double> eval_grid) {
    NondecreaseReport rep;
    FiniteElementFunction y = fact.solve(LoadSpec::density(f.to_coefficient()));

    std::vector<double> samples;
    samples.reserve(eval_grid.size());
    for (double t : eval_grid) samples.push_back(y.evaluate(t));

    rep.zero_tol_y = default_zero_tol(samples);
    SignCount cy = sign_changes(eval_grid, samples, rep.zero_tol_y);
    rep.n_y = cy.changes;
    rep.y_all_zero = cy.all_zero;
    rep.y_alternations = std::move(cy.alternations);

    rep.zero_tol_f = default_zero_tol(f.values);
    SignCount cf = sign_changes(f, rep.zero_tol_f);
    rep.n_f = cf.changes;
    rep.f_alternations = std::move(cf.alternations);

    rep.pass = rep.n_y <= rep.n_f;
    return rep;
}

}  // namespace signreg
