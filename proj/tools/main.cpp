// Command-line driver: parses a problem config, dispatches a verification
// command, and emits the JSON report (stdout, plus files under --out).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "signreg/errors.hpp"
#include "signreg/harness.hpp"

namespace {

using signreg::RunConfig;
using signreg::RunResult;

struct Cli {
    std::string config_path;
    RunConfig overrides;
    bool mesh_set = false, grid_set = false, seeds_set = false, nmax_set = false;
    bool order_set = false, eps_set = false, levels_set = false, seed_set = false;
    bool include_boundary = false;
    std::string out;
    int n = 1;
    double t = 0.5, s = 0.5;
    std::string mode = "variable";
};

void apply_overrides(const Cli& cli, RunConfig& cfg) {
    if (cli.mesh_set) cfg.mesh = cli.overrides.mesh;
    if (cli.grid_set) cfg.grid = cli.overrides.grid;
    if (cli.seeds_set) cfg.seeds = cli.overrides.seeds;
    if (cli.nmax_set) cfg.nmax = cli.overrides.nmax;
    if (cli.order_set) cfg.order = cli.overrides.order;
    if (cli.eps_set) cfg.eps = cli.overrides.eps;
    if (cli.levels_set) cfg.levels = cli.overrides.levels;
    if (cli.seed_set) cfg.seed = cli.overrides.seed;
    if (cli.include_boundary) cfg.include_boundary = true;
    if (!cli.out.empty()) cfg.out = cli.out;
}

void add_common(CLI::App* cmd, Cli& cli) {
    cmd->add_option("config", cli.config_path, "problem configuration file")->required();
    cmd->add_option("--mesh", cli.overrides.mesh, "element count")
        ->each([&cli](const std::string&) { cli.mesh_set = true; });
    cmd->add_option("--grid", cli.overrides.grid, "kernel grid point count")
        ->each([&cli](const std::string&) { cli.grid_set = true; });
    cmd->add_option("--seeds", cli.overrides.seeds, "seeds per sign-change count")
        ->each([&cli](const std::string&) { cli.seeds_set = true; });
    cmd->add_option("--nmax", cli.overrides.nmax, "largest sign-change count in the suite")
        ->each([&cli](const std::string&) { cli.nmax_set = true; });
    cmd->add_option("--order", cli.overrides.order, "largest minor order")
        ->each([&cli](const std::string&) { cli.order_set = true; });
    cmd->add_option("--eps", cli.overrides.eps, "restriction distance from the endpoints")
        ->each([&cli](const std::string&) { cli.eps_set = true; });
    cmd->add_option("--levels", cli.overrides.levels, "refinement levels")
        ->each([&cli](const std::string&) { cli.levels_set = true; });
    cmd->add_option("--seed", cli.overrides.seed, "base random seed")
        ->each([&cli](const std::string&) { cli.seed_set = true; });
    cmd->add_flag("--closed", cli.include_boundary, "include the endpoints in kernel grids");
    cmd->add_option("--out", cli.out, "directory for report and artifact files");
}

int emit(RunResult result, const RunConfig& cfg, int argc, char** argv) {
    // timestamp and timings live in an isolated subtree so that reports are
    // otherwise byte-identical across reruns
    std::string cmdline;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) cmdline += ' ';
        cmdline += argv[i];
    }
    result.report["command_line"] = cmdline;
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    result.report["meta"] = {{"timestamp", stamp}};

    std::string text = result.report.dump(2) + "\n";
    std::cout << text;
    if (!cfg.out.empty()) {
        std::filesystem::create_directories(cfg.out);
        std::ofstream(std::filesystem::path(cfg.out) / "report.json") << text;
        for (const auto& [name, content] : result.artifacts)
            std::ofstream(std::filesystem::path(cfg.out) / name) << content;
    } else {
        for (const auto& [name, content] : result.artifacts) {
            (void)content;
            std::cerr << "note: artifact " << name << " kept in memory; pass --out DIR to write\n";
        }
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sign-regularity toolkit for fourth-order boundary value problems"};
    app.require_subcommand(1);

    Cli cli;
    auto* check = app.add_subcommand("check", "validate, factorize, kernel positivity");
    add_common(check, cli);
    auto* green = app.add_subcommand("green", "Green kernel CSV and positivity report");
    add_common(green, cli);
    auto* signs = app.add_subcommand("signs", "single-load sign-change verdict");
    add_common(signs, cli);
    signs->add_option("--n", cli.n, "sign changes of the generated load");
    auto* suite = app.add_subcommand("suite", "randomized nondecrease verification");
    add_common(suite, cli);
    auto* cert = app.add_subcommand("certificate", "interlacing chain certificate");
    add_common(cert, cli);
    cert->add_option("--n", cli.n, "sign changes of the generated load");
    auto* transform = app.add_subcommand("transform", "conjugation reduction study");
    add_common(transform, cli);
    transform->add_option("--mode", cli.mode, "variable | multiplier");
    auto* tn = app.add_subcommand("tn", "compound-minor nonnegativity report");
    add_common(tn, cli);
    auto* restrict_cmd = app.add_subcommand("restrict", "restricted-kernel positivity");
    add_common(restrict_cmd, cli);
    auto* refine = app.add_subcommand("refine", "pointwise kernel refinement study");
    add_common(refine, cli);
    refine->add_option("--t", cli.t, "first kernel argument");
    refine->add_option("--s", cli.s, "second kernel argument");
    auto* residuals = app.add_subcommand("residuals", "declared strong-form residuals");
    add_common(residuals, cli);

    CLI11_PARSE(app, argc, argv);

    try {
        signreg::ParsedConfig parsed = signreg::parse_config_file(cli.config_path);
        RunConfig cfg = parsed.options;
        apply_overrides(cli, cfg);

        RunResult result;
        if (check->parsed()) result = signreg::run_check(parsed.problem, cfg);
        else if (green->parsed()) result = signreg::run_green(parsed.problem, cfg);
        else if (signs->parsed()) result = signreg::run_signs(parsed.problem, cfg, cli.n);
        else if (suite->parsed()) result = signreg::run_suite(parsed.problem, cfg);
        else if (cert->parsed()) result = signreg::run_certificate(parsed.problem, cfg, cli.n);
        else if (transform->parsed())
            result = signreg::run_transform(parsed.problem, cfg, cli.mode);
        else if (tn->parsed()) result = signreg::run_tn(parsed.problem, cfg);
        else if (restrict_cmd->parsed()) result = signreg::run_restrict(parsed.problem, cfg);
        else if (refine->parsed())
            result = signreg::run_refine(parsed.problem, cfg, cli.t, cli.s);
        else if (residuals->parsed()) result = signreg::run_residuals(parsed.problem, cfg);
        else return 1;

        return emit(std::move(result), cfg, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
