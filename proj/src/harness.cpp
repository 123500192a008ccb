#include "signreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "signreg/certificate.hpp"
#include "signreg/errors.hpp"
#include "signreg/green.hpp"
#include "signreg/signs.hpp"
#include "signreg/tn.hpp"
#include "signreg/transforms.hpp"

namespace signreg {

using nlohmann::ordered_json;

namespace {

ordered_json scalar_json(const ScalarCoefficient& c) {
    ordered_json j;
    switch (c.kind()) {
        case CoeffKind::Constant:
            j["kind"] = "constant";
            j["value"] = c.constant_value();
            break;
        case CoeffKind::Sampled:
            j["kind"] = "sampled";
            j["points"] = c.sample_points();
            j["values"] = c.sample_values();
            break;
        case CoeffKind::PiecewisePolynomial: {
            j["kind"] = "piecewise-polynomial";
            j["breaks"] = c.as_piecewise().breaks();
            ordered_json pieces = ordered_json::array();
            for (const Poly& p : c.as_piecewise().pieces()) pieces.push_back(p.coeffs());
            j["pieces"] = pieces;
            break;
        }
    }
    return j;
}

ordered_json generalized_json(const GeneralizedCoefficient& g) {
    ordered_json j;
    j["smooth"] = g.smooth ? scalar_json(*g.smooth) : ordered_json(nullptr);
    ordered_json atoms = ordered_json::array();
    for (const AtomicTerm& a : g.atoms) atoms.push_back({a.location, a.weight, a.order});
    j["atoms"] = atoms;
    j["gradient"] = g.gradient ? scalar_json(*g.gradient) : ordered_json(nullptr);
    return j;
}

ordered_json positivity_json(const PositivityReport& rep) {
    ordered_json j;
    j["classification"] = to_string(rep.classification);
    j["min_interior"] = rep.min_interior;
    j["argmin"] = {rep.argmin_interior_t, rep.argmin_interior_s};
    j["min_closed"] = rep.min_closed;
    j["argmin_closed"] = {rep.argmin_closed_t, rep.argmin_closed_s};
    j["tolerances"] = {{"positivity_tol", rep.positivity_tol},
                       {"boundary_margin", rep.boundary_margin}};
    return j;
}

struct Built {
    std::shared_ptr<DiscreteOperator> op;
    Factorization fact;
};

Built build(const Problem& problem, int mesh_n, std::span<const double> extra = {}) {
    Mesh mesh = build_mesh(problem, mesh_n, extra);
    auto op = std::make_shared<DiscreteOperator>(assemble(problem, mesh));
    Factorization fact = factorize(op);
    return Built{op, std::move(fact)};
}

Mesh uniform_mesh(int n) {
    Mesh m;
    m.nodes.reserve(n + 1);
    for (int i = 0; i <= n; ++i) m.nodes.push_back(static_cast<double>(i) / n);
    return m;
}

ordered_json report_header(const char* command, const Problem& problem) {
    ordered_json j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    j["problem"] = problem_echo_json(problem);
    return j;
}

std::uint64_t suite_seed(std::uint64_t base, int n, int index) {
    return base * 1000000ULL + static_cast<std::uint64_t>(n) * 10000ULL +
           static_cast<std::uint64_t>(index);
}

ordered_json sampled_json(const SampledFunction& f) {
    return ordered_json{{"points", f.points}, {"values", f.values}};
}

}  // namespace

std::vector<double> make_grid(int n, bool include_boundary) {
    std::vector<double> g;
    if (include_boundary) g.push_back(0.0);
    for (int i = 1; i <= n; ++i) g.push_back(static_cast<double>(i) / (n + 1));
    if (include_boundary) g.push_back(1.0);
    return g;
}

ordered_json problem_echo_json(const Problem& problem) {
    Problem c = validated(problem);
    ordered_json j;
    j["p"] = scalar_json(c.p);
    j["q"] = generalized_json(c.q);
    j["h"] = generalized_json(c.h);
    ordered_json fs = ordered_json::array();
    for (const auto& f : c.subspace.functionals) fs.push_back({f.endpoint, f.a, f.b});
    j["subspace"] = fs;
    j["p_margin"] = c.p_margin;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(problem_hash(c)));
    j["hash"] = buf;
    return j;
}

RunResult run_check(const Problem& problem, const RunConfig& cfg) {
    RunResult r;
    r.report = report_header("check", problem);
    ValidationReport vr = validate_problem(problem);
    ordered_json issues = ordered_json::array();
    for (const auto& i : vr.issues) issues.push_back({{"code", i.code}, {"message", i.message}});
    r.report["validation"] = {{"ok", vr.ok}, {"issues", issues}};
    if (!vr.ok) {
        r.exit_code = 2;
        return r;
    }

    std::vector<double> grid = make_grid(cfg.grid, cfg.include_boundary);
    Built b = build(vr.canonical, cfg.mesh, grid);
    r.report["mesh"] = {{"elements", b.op->mesh.n_elements()},
                        {"dofs", b.op->n_reduced()}};
    r.report["factorization"] = {{"positive_definite", b.fact.positive_definite()},
                                 {"min_pivot", b.fact.min_pivot()},
                                 {"pivot_tol", b.fact.pivot_tolerance()}};
    if (!b.fact.positive_definite()) {
        r.exit_code = 2;
        return r;
    }
    GreenKernel kernel = green_matrix(b.fact, grid, grid);
    PositivityReport pos = positivity_report(kernel, cfg.boundary_margin);
    r.report["kernel"] = positivity_json(pos);
    r.exit_code = pos.classification == KernelClass::SignChanging ? 2 : 0;
    return r;
}

RunResult run_green(const Problem& problem, const RunConfig& cfg) {
    RunResult r;
    r.report = report_header("green", problem);
    std::vector<double> grid = make_grid(cfg.grid, cfg.include_boundary);
    Built b = build(problem, cfg.mesh, grid);
    b.fact.require_positive_definite();
    GreenKernel kernel = green_matrix(b.fact, grid, grid);
    PositivityReport pos = positivity_report(kernel, cfg.boundary_margin);
    r.report["grid"] = grid;
    r.report["mesh"] = {{"elements", b.op->mesh.n_elements()}};
    r.report["kernel"] = positivity_json(pos);
    std::ostringstream csv;
    write_kernel_csv(kernel, csv);
    r.artifacts["kernel.csv"] = csv.str();
    r.exit_code = pos.classification == KernelClass::SignChanging ? 2 : 0;
    return r;
}

namespace {

ordered_json nondecrease_json(const NondecreaseReport& rep) {
    ordered_json j;
    j["n_f"] = rep.n_f;
    j["n_y"] = rep.n_y;
    j["pass"] = rep.pass;
    ordered_json alts = ordered_json::array();
    for (const auto& [a, b] : rep.y_alternations) alts.push_back({a, b});
    j["alternation_points"] = alts;
    j["tolerances"] = {{"zero_tol_y", rep.zero_tol_y}, {"zero_tol_f", rep.zero_tol_f}};
    return j;
}

}  // namespace

RunResult run_signs(const Problem& problem, const RunConfig& cfg, int n) {
    RunResult r;
    r.report = report_header("signs", problem);
    Built b = build(problem, cfg.mesh);
    b.fact.require_positive_definite();
    SampledFunction f = random_sign_pattern(n, cfg.seed);
    std::vector<double> grid = default_eval_grid(b.op->mesh);
    NondecreaseReport rep = verify_nondecrease(b.fact, f, grid);
    r.report["n_requested"] = n;
    r.report["seed"] = cfg.seed;
    r.report["load"] = sampled_json(f);
    r.report["verdict"] = nondecrease_json(rep);
    r.exit_code = rep.pass ? 0 : 2;
    return r;
}

RunResult run_suite(const Problem& problem, const RunConfig& cfg) {
    RunResult r;
    r.report = report_header("suite", problem);
    std::vector<double> grid = make_grid(cfg.grid, cfg.include_boundary);
    Built b = build(problem, cfg.mesh, grid);
    b.fact.require_positive_definite();

    // the Proposition-1 hypothesis is kernel positivity: check it first and
    // mark the suite verdict as conditional on this evidence
    GreenKernel kernel = green_matrix(b.fact, grid, grid);
    PositivityReport pos = positivity_report(kernel, cfg.boundary_margin);
    r.report["kernel"] = positivity_json(pos);
    const bool kernel_positive = pos.classification == KernelClass::InteriorPositive ||
                                 pos.classification == KernelClass::ClosedUniformPositive;
    r.report["nondecrease_conditional_on_kernel_positivity"] = !kernel_positive;

    std::vector<double> eval_grid = default_eval_grid(b.op->mesh);
    int total = 0, passed = 0;
    ordered_json failures = ordered_json::array();
    ordered_json by_n = ordered_json::array();
    for (int n = 0; n <= cfg.nmax; ++n) {
        int n_pass = 0;
        for (int i = 0; i < cfg.seeds; ++i) {
            std::uint64_t seed = suite_seed(cfg.seed, n, i);
            SampledFunction f = random_sign_pattern(n, seed);
            NondecreaseReport rep = verify_nondecrease(b.fact, f, eval_grid);
            ++total;
            if (rep.pass) {
                ++passed;
                ++n_pass;
            } else {
                failures.push_back({{"n", n},
                                    {"seed", seed},
                                    {"n_f", rep.n_f},
                                    {"n_y", rep.n_y}});
                ordered_json w;
                w["n"] = n;
                w["seed"] = seed;
                w["load"] = sampled_json(f);
                w["verdict"] = nondecrease_json(rep);
                r.artifacts["witness_n" + std::to_string(n) + "_s" + std::to_string(seed) +
                            ".json"] = w.dump(2) + "\n";
            }
        }
        by_n.push_back({{"n", n}, {"runs", cfg.seeds}, {"passed", n_pass}});
    }
    r.report["runs"] = {{"total", total}, {"passed", passed}, {"by_n", by_n}};
    r.report["failures"] = failures;
    r.report["tolerances"] = {{"zero_tol_rel", 1e-11}};

    // a sign-changing kernel admits a positive load whose solution alternates:
    // store the demonstration witness
    if (pos.classification == KernelClass::SignChanging) {
        const double s_star = pos.argmin_interior_s;
        const double width = std::max(2.0 / cfg.mesh, 1.0 / 64);
        SampledFunction bump;
        for (double x : {0.0, s_star - width, s_star, s_star + width, 1.0}) {
            if (!bump.points.empty() && x <= bump.points.back() + 1e-12) continue;
            if (x < 0.0 || x > 1.0) continue;
            bump.points.push_back(x);
            bump.values.push_back(x == s_star ? 1.0 : 0.0);
        }
        NondecreaseReport rep = verify_nondecrease(b.fact, bump, eval_grid);
        ordered_json w;
        w["demonstration"] = "necessity of kernel positivity";
        w["kernel_argmin"] = {pos.argmin_interior_t, pos.argmin_interior_s};
        w["kernel_min"] = pos.min_interior;
        w["load"] = sampled_json(bump);
        w["verdict"] = nondecrease_json(rep);
        r.report["necessity_witness"] = w;
        r.artifacts["witness_bump.json"] = w.dump(2) + "\n";
    }

    r.exit_code = (passed == total && kernel_positive) ? 0 : 2;
    return r;
}

namespace {

ordered_json certificate_json(const Certificate& cert) {
    ordered_json j;
    j["n"] = cert.n;
    j["m"] = cert.m;
    j["y_points"] = cert.y_points;
    auto chain = [](const std::vector<std::pair<int, double>>& c) {
        ordered_json a = ordered_json::array();
        for (const auto& [k, x] : c) a.push_back({{"k", k}, {"point", x}});
        return a;
    };
    j["chains"] = {{"y_prime", chain(cert.chain1)},
                   {"moment", chain(cert.chain2)},
                   {"moment_prime", chain(cert.chain3)},
                   {"load", chain(cert.chain4)}};
    ordered_json levels;
    for (int level = 0; level <= 4; ++level) {
        ordered_json arr = ordered_json::array();
        for (const CertEntry& e : cert.entries) {
            if (e.level != level) continue;
            arr.push_back({{"k", e.k},
                           {"point", e.x1},
                           {"quantity", to_string(e.q1)},
                           {"value", e.value1},
                           {"side", e.side1 == Side::Left ? "L" : "R"},
                           {"partner_point", e.x2},
                           {"partner_quantity", to_string(e.q2)},
                           {"partner_value", e.value2},
                           {"required_sign", e.required_sign}});
        }
        if (!arr.empty()) levels[std::to_string(level)] = arr;
    }
    j["inequalities"] = levels;
    j["cert_tol"] = cert.cert_tol;
    return j;
}

}  // namespace

RunResult run_certificate(const Problem& problem, const RunConfig& cfg, int n) {
    RunResult r;
    r.report = report_header("certificate", problem);
    Built b = build(problem, cfg.mesh);
    b.fact.require_positive_definite();
    SampledFunction f = random_sign_pattern(n, cfg.seed);
    CertificateResult res = sign_chain_certificate(b.fact, f);
    CertificateCheck check = validate_certificate(res.certificate, b.op->problem, res.solution, f);
    r.report["n_requested"] = n;
    r.report["seed"] = cfg.seed;
    r.report["refinements"] = res.refinements;
    r.report["certificate"] = certificate_json(res.certificate);
    r.report["validation"] = {{"valid", check.valid},
                              {"min_margin", check.min_margin},
                              {"detail", check.detail}};
    r.exit_code = check.valid ? 0 : 2;
    return r;
}

RunResult run_transform(const Problem& problem, const RunConfig& cfg, const std::string& mode) {
    RunResult r;
    r.report = report_header("transform", problem);
    r.report["mode"] = mode;
    const int levels = std::max(1, cfg.levels);

    ordered_json residuals = ordered_json::array();
    double first_res = 0.0, last_res = 0.0;
    ordered_json head;
    for (int k = 0; k < levels; ++k) {
        const int n = cfg.mesh << k;
        Mesh mesh = build_mesh(problem, n);
        TransformResult tr = [&] {
            if (mode == "variable") {
                SturmWeight w = sturm_weight(second_order_of(problem), mesh);
                return variable_change(w, problem);
            }
            if (mode == "multiplier") {
                Factorization fact = factorize(assemble(problem, mesh));
                FiniteElementFunction sigma = multiplier_weight(fact);
                return multiplier_transform(sigma, problem);
            }
            throw Error("transform mode must be 'variable' or 'multiplier'");
        }();
        DiscreteOperator op = assemble(problem, mesh);
        std::vector<FiniteElementFunction> probes = conjugation_probes(uniform_mesh(n));
        double res = verify_conjugation(op, tr, probes);
        residuals.push_back({{"level", k}, {"mesh", n}, {"residual", res}});
        if (k == 0) {
            first_res = res;
            head["kind"] = mode == "variable" ? "variable_change" : "multiplier";
            head["omega"] = tr.kind == TransformKind::VariableChange ? ordered_json(tr.omega)
                                                                     : ordered_json(nullptr);
            head["alpha"] = tr.alpha;
            head["beta"] = tr.kind == TransformKind::VariableChange ? ordered_json(tr.beta)
                                                                    : ordered_json(nullptr);
            head["gamma"] = tr.kind == TransformKind::VariableChange ? ordered_json(tr.gamma)
                                                                     : ordered_json(nullptr);
            head["sigma_min"] = tr.sigma_min;
        }
        last_res = res;
    }
    for (auto& [k, v] : head.items()) r.report[k] = v;
    r.report["residuals_by_level"] = residuals;
    if (levels > 1 && last_res > 0.0)
        r.report["observed_order"] = std::log2(first_res / last_res) / (levels - 1);
    else
        r.report["observed_order"] = nullptr;
    return r;
}

RunResult run_tn(const Problem& problem, const RunConfig& cfg) {
    RunResult r;
    r.report = report_header("tn", problem);
    std::vector<double> grid = make_grid(cfg.grid, cfg.include_boundary);
    Built b = build(problem, cfg.mesh, grid);
    b.fact.require_positive_definite();
    GreenKernel kernel = green_matrix(b.fact, grid, grid);
    TNReport rep = tn_report(kernel, cfg.order, 1e-9, cfg.seed);
    ordered_json orders;
    for (const auto& [order, st] : rep.orders) {
        ordered_json v;
        v["min_minor"] = st.min_minor;
        v["min_diagonal_minor"] =
            std::isnan(st.min_diagonal) ? ordered_json(nullptr) : ordered_json(st.min_diagonal);
        v["checked"] = st.checked;
        ordered_json viol = ordered_json::array();
        for (const auto& mv : st.violations)
            viol.push_back({{"rows", mv.rows}, {"cols", mv.cols}, {"value", mv.value}});
        v["violations"] = viol;
        orders[std::to_string(order)] = v;
    }
    r.report["grid"] = grid;
    r.report["orders"] = orders;
    r.report["enumeration"] =
        rep.exhaustive
            ? ordered_json("exhaustive")
            : ordered_json{{"sampled", {{"seed", rep.sample_seed}, {"count", rep.sample_count}}}};
    r.report["tolerances"] = {{"tn_tol_rel", rep.tol_rel}};
    r.exit_code = rep.any_violation() ? 2 : 0;
    return r;
}

RunResult run_restrict(const Problem& problem, const RunConfig& cfg) {
    RunResult r;
    r.report = report_header("restrict", problem);
    std::vector<double> grid = make_grid(cfg.grid, cfg.include_boundary);
    Built b = build(problem, cfg.mesh, grid);
    b.fact.require_positive_definite();
    GreenKernel kernel = green_matrix(b.fact, grid, grid);
    GreenKernel restricted = restrict_kernel(kernel, cfg.eps);
    PositivityReport pos = positivity_report(restricted, 0.0);
    r.report["eps"] = cfg.eps;
    r.report["restricted_grid"] = {{"t", restricted.t_grid}, {"s", restricted.s_grid}};
    r.report["kernel"] = positivity_json(pos);
    std::ostringstream csv;
    write_kernel_csv(restricted, csv);
    r.artifacts["kernel_restricted.csv"] = csv.str();
    r.exit_code = pos.min_closed > pos.positivity_tol ? 0 : 2;
    return r;
}

RunResult run_refine(const Problem& problem, const RunConfig& cfg, double t, double s) {
    if (cfg.levels < 3) throw Error("refinement study needs at least 3 levels");
    RunResult r;
    r.report = report_header("refine", problem);
    std::vector<double> extras{t, s};
    std::vector<double> values;
    ordered_json table = ordered_json::array();
    for (int k = 0; k < cfg.levels; ++k) {
        const int n = cfg.mesh << k;
        Built b = build(problem, n, extras);
        b.fact.require_positive_definite();
        GreenKernel kernel = green_matrix(b.fact, std::vector<double>{t},
                                          std::vector<double>{s});
        values.push_back(kernel.values[0][0]);
        table.push_back({{"level", k}, {"mesh", n}, {"value", kernel.values[0][0]}});
    }
    ordered_json orders = ordered_json::array();
    for (std::size_t k = 0; k + 2 < values.size(); ++k) {
        double d1 = std::abs(values[k + 1] - values[k]);
        double d2 = std::abs(values[k + 2] - values[k + 1]);
        orders.push_back(d2 > 0.0 ? ordered_json(std::log2(d1 / d2)) : ordered_json(nullptr));
    }
    r.report["point"] = {t, s};
    r.report["table"] = table;
    r.report["observed_orders"] = orders;
    return r;
}

RunResult run_residuals(const Problem& problem, const RunConfig& cfg) {
    if (cfg.residuals.empty())
        throw Error("no strong-form residuals declared in the config [residuals] section");
    RunResult r;
    r.report = report_header("residuals", problem);
    const int levels = std::max(1, cfg.levels);

    ordered_json table = ordered_json::array();
    std::map<std::string, std::vector<double>> history;
    double finest_max = 0.0, finest_sup = 0.0;
    for (int k = 0; k < levels; ++k) {
        int n = cfg.mesh >> (levels - 1 - k);
        n = std::max(n, 4);
        Built b = build(problem, n);
        b.fact.require_positive_definite();
        FiniteElementFunction y =
            b.fact.solve(LoadSpec::density(ScalarCoefficient::constant(1.0)));
        double sup = y.max_abs(16);
        ordered_json row;
        row["mesh"] = n;
        row["y_sup"] = sup;
        ordered_json vals;
        double worst = 0.0;
        for (const ResidualSpec& spec : cfg.residuals) {
            double v = 0.0;
            for (const ResidualTerm& term : spec.terms)
                v += term.coeff * y.evaluate(term.point, term.order, term.side);
            vals[spec.name] = v;
            history[spec.name].push_back(std::abs(v));
            worst = std::max(worst, std::abs(v));
        }
        row["residuals"] = vals;
        row["max_abs_residual"] = worst;
        table.push_back(row);
        if (k == levels - 1) {
            finest_max = worst;
            finest_sup = sup;
        }
    }
    ordered_json orders;
    for (const auto& [name, vals] : history) {
        if (vals.size() >= 2 && vals.back() > 0.0)
            orders[name] = std::log2(vals.front() / vals.back()) /
                           static_cast<double>(vals.size() - 1);
        else
            orders[name] = nullptr;
    }
    r.report["levels"] = table;
    r.report["observed_orders"] = orders;
    r.report["finest"] = {{"max_abs_residual", finest_max},
                          {"y_sup", finest_sup},
                          {"relative", finest_max / (finest_sup > 0.0 ? finest_sup : 1.0)}};
    return r;
}

}  // namespace signreg
