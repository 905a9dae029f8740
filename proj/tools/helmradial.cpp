// helmradial: solve, construct, scan, verify, whisper.
//
// Exit codes: 0 success, 1 residual or suite failure, 2 invalid input, 3 near-resonant denominator.
#include "helm/error.hpp"
#include "helm/evaluate.hpp"
#include "helm/green.hpp"
#include "helm/io.hpp"
#include "helm/parallel.hpp"
#include "helm/problem.hpp"
#include "helm/stability.hpp"
#include "helm/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace helm;

namespace {

constexpr int exit_ok = 0, exit_failed = 1, exit_invalid = 2, exit_resonant = 3;

struct RunConfig {
    std::string input;
    std::string output_dir;
    int grid = 201;
    int quad_order = 32;
    std::uint64_t seed = 1;
    int samples = 0; // command-specific default when 0
    double jitter = 0.01;
    std::string suite = "all";
    std::string kind = "localised";
    int n = 2;
    double c1 = 1.0, c2 = 3.0;
    double wc1 = 1.0, wc2 = 2.0, x1 = 0.5; // whisper geometry
    std::vector<int> modes{5, 10, 15, 20};
    std::vector<double> omega_window;
};

int report_error(const Error& e, const std::vector<Violation>& violations = {})
{
    nlohmann::json j = {{"error", to_string(e.kind())}, {"message", e.what()}};
    if (e.magnitude() != 0.0) j["magnitude"] = e.magnitude();
    if (!violations.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (auto const& v : violations) list.push_back({{"index", v.index}, {"reason", v.reason}});
        j["violations"] = list;
    }
    std::cerr << dump_json(j);
    switch (e.kind()) {
    case ErrorKind::near_resonant: return exit_resonant;
    case ErrorKind::validation:
    case ErrorKind::unsupported_mode:
    case ErrorKind::inapplicable_profile:
    case ErrorKind::not_in_interference:
    case ErrorKind::window_too_coarse: return exit_invalid;
    default: return exit_failed;
    }
}

std::string read_input(const std::string& input)
{
    auto const first = input.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && input[first] == '{') return input;
    std::ifstream in(input, std::ios::binary);
    if (!in) throw Error(ErrorKind::validation, "cannot read input '" + input + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ProblemSpec load_spec(const std::string& input)
{
    ProblemSpec spec = spec_from_json(read_input(input));
    auto const violations = validate(spec);
    if (!violations.empty()) {
        Error const e(ErrorKind::validation, "invalid problem spec");
        report_error(e, violations);
        throw e;
    }
    return spec;
}

fs::path prepare_dir(const std::string& dir)
{
    if (dir.empty()) throw Error(ErrorKind::validation, "--output-dir is required");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::validation, "cannot create output directory '" + dir + "'");
    return dir;
}

nlohmann::json complex_list(const std::vector<cplx>& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (cplx z : v) out.push_back({z.real(), z.imag()});
    return out;
}

std::string green_json(const GreenColumn& col, cplx scale)
{
    nlohmann::json j = nlohmann::json::object();
    j["odd_entries"] = complex_list(col.odd_entries);
    j["even_entries"] = complex_list(col.even_entries);
    j["odd_log_abs"] = col.odd_log_abs;
    j["even_log_abs"] = col.even_log_abs;
    j["log_abs_beta_n"] = col.log_abs_beta_n;
    j["rhs_scale"] = {scale.real(), scale.imag()};
    return dump_json(j);
}

double sup_norm(const RadialSolution& sol)
{
    double const s = radial_sup(sol);
    return sol.spec.d == 3 && sol.spec.m == 0 ? s * y00() : s;
}

int cmd_solve(const RunConfig& cfg)
{
    ProblemSpec const spec = load_spec(cfg.input);
    bool const disc = spec.d == 3 && spec.m == 0;
    if (disc && cfg.grid < 32) throw Error(ErrorKind::validation, "--grid must be at least 32");
    fs::path const dir = prepare_dir(cfg.output_dir);

    GreenColumn const col = green_last_column(spec);
    RadialSolution const sol{spec, layer_coefficients(spec)};
    DiagnosticsReport const rep = diagnose(sol, cfg.quad_order);

    write_file_atomic(dir / "radial.csv", radial_csv(sol, cfg.samples > 0 ? cfg.samples : 1001));
    if (disc) write_file_atomic(dir / "disc.csv", disc_csv(disc_slice(sol, cfg.grid)));
    write_file_atomic(dir / "diagnostics.json", to_json(rep));
    write_file_atomic(dir / "green_column.json", green_json(col, rhs_scale(spec)));
    if (disc && is_alternating(spec.profile)) write_file_atomic(dir / "stability.json", to_json(certify_beta_bounds(spec)));

    std::cout << "interface " << format_double(rep.max_interface) << " ode " << format_double(rep.ode) << " dtn "
              << format_double(rep.dtn) << (rep.residuals_pass() ? " pass" : " FAIL") << '\n';
    return rep.residuals_pass() ? exit_ok : exit_failed;
}

int cmd_construct(const RunConfig& cfg)
{
    ProblemSpec spec;
    if (cfg.kind == "localised")
        spec = construct_localisation_example(cfg.n, cfg.c1, cfg.c2);
    else if (cfg.kind == "stable")
        spec = construct_stable_example(cfg.n, cfg.c1, cfg.c2);
    else
        throw Error(ErrorKind::validation, "--kind must be localised or stable");
    std::cout << to_json(spec);
    return exit_ok;
}

ProblemSpec base_spec(const RunConfig& cfg)
{
    if (!cfg.input.empty()) return load_spec(cfg.input);
    return cfg.kind == "stable" ? construct_stable_example(cfg.n, cfg.c1, cfg.c2)
                                : construct_localisation_example(cfg.n, cfg.c1, cfg.c2);
}

struct ScanRow {
    int sample;
    double omega_shift;
    int jump;
    double jump_shift;
    double omega;
    double sup = std::numeric_limits<double>::quiet_NaN();
    double max_green = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

ScanRow scan_sample(const ProblemSpec& base, int sample, std::uint64_t seed, double jitter)
{
    ScanRow row{sample, 0.0, 0, 0.0, base.omega};
    ProblemSpec s = base;
    if (sample > 0 && jitter > 0.0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(sample)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        row.omega_shift = jitter * u(rng);
        row.jump = std::uniform_int_distribution<int>(1, base.n())(rng);
        auto& x = s.profile.jump_points;
        double const room = std::min(x[row.jump] - x[row.jump - 1], x[row.jump + 1] - x[row.jump]);
        row.jump_shift = jitter * room * u(rng);
        s.omega *= 1.0 + row.omega_shift;
        x[row.jump] += row.jump_shift;
        row.omega = s.omega;
    }
    try {
        GreenColumn const col = green_last_column(s);
        double lg = -std::numeric_limits<double>::infinity();
        for (double v : col.odd_log_abs) lg = std::max(lg, v);
        for (double v : col.even_log_abs) lg = std::max(lg, v);
        row.max_green = std::exp(lg);
        row.sup = sup_norm({s, layer_coefficients(s)});
    } catch (const Error& e) {
        row.status = to_string(e.kind());
    }
    return row;
}

int cmd_scan(const RunConfig& cfg)
{
    ProblemSpec const base = base_spec(cfg);
    if (!(cfg.jitter >= 0.0 && cfg.jitter < 1.0)) throw Error(ErrorKind::validation, "--jitter must lie in [0, 1)");
    int const samples = cfg.samples > 0 ? cfg.samples : 100;
    std::vector<ScanRow> rows(samples + 1);
    parallel_for(samples + 1, [&](int i) { rows[i] = scan_sample(base, i, cfg.seed, cfg.jitter); });

    std::ostringstream os;
    os << "sample,omega_shift,jump,jump_shift,omega,sup_norm,max_green,status\n";
    for (auto const& r : rows)
        os << r.sample << ',' << format_double(r.omega_shift) << ',' << r.jump << ',' << format_double(r.jump_shift)
           << ',' << format_double(r.omega) << ',' << format_double(r.sup) << ',' << format_double(r.max_green) << ','
           << r.status << '\n';
    if (cfg.output_dir.empty())
        std::cout << os.str();
    else
        write_file_atomic(prepare_dir(cfg.output_dir) / "scan.csv", os.str());
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg)
{
    std::vector<int> const ids = suite_criteria(cfg.suite);
    std::vector<CriterionResult> results;
    for (int id : ids) {
        results.push_back(run_criterion(id));
        auto const& r = results.back();
        std::cerr << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << '\n';
    }
    std::string const report = criteria_json(cfg.suite, results);
    std::cout << report;
    if (!cfg.output_dir.empty()) {
        fs::path const dir = prepare_dir(cfg.output_dir);
        write_file_atomic(dir / "verify.json", report);
        if (std::find(ids.begin(), ids.end(), 8) != ids.end())
            write_file_atomic(dir / "beta_sweep.csv", sweep_csv(beta_sweep(beta_sweep_seed_base, 500)));
    }
    bool const ok = std::all_of(results.begin(), results.end(), [](auto const& r) { return r.passed; });
    return ok ? exit_ok : exit_failed;
}

int cmd_whisper(const RunConfig& cfg)
{
    if (!cfg.omega_window.empty() && cfg.omega_window.size() != 2)
        throw Error(ErrorKind::validation, "--omega-window takes two values");
    int const samples = cfg.samples > 0 ? cfg.samples : 2001;
    nlohmann::json out = nlohmann::json::array();
    for (int m : cfg.modes) {
        auto const window = cfg.omega_window.empty() ? default_whisper_window(m, cfg.wc1, cfg.x1)
                                                     : std::pair{cfg.omega_window[0], cfg.omega_window[1]};
        out.push_back(nlohmann::json::parse(to_json(whispering_gallery_scan(m, cfg.wc1, cfg.wc2, cfg.x1, window, samples))));
    }
    std::string const text = dump_json(out);
    if (cfg.output_dir.empty())
        std::cout << text;
    else
        write_file_atomic(prepare_dir(cfg.output_dir) / "whisper.json", text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Radial Helmholtz transmission solver"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "Solve a problem spec and write radial, disc, diagnostics and Green data");
    solve->add_option("--input", cfg.input, "Spec file or inline JSON")->required();
    solve->add_option("--output-dir", cfg.output_dir, "Directory for output files")->required();
    solve->add_option("--grid", cfg.grid, "Disc lattice size (>= 32)");
    solve->add_option("--quad-order", cfg.quad_order, "Starting Gauss-Legendre order for the energy norm");
    solve->add_option("--samples", cfg.samples, "Radial samples (default 1001)");

    auto* construct = app.add_subcommand("construct", "Print a generated spec");
    construct->add_option("--kind", cfg.kind, "localised or stable")->required();
    construct->add_option("--n", cfg.n, "Number of interior jumps")->required();
    construct->add_option("--c1", cfg.c1, "Odd-layer speed");
    construct->add_option("--c2", cfg.c2, "Even-layer speed");

    auto* scan = app.add_subcommand("scan", "Perturbation sweep around a base spec");
    scan->add_option("--input", cfg.input, "Base spec (otherwise built from --kind, --n, --c1, --c2)");
    scan->add_option("--kind", cfg.kind, "localised or stable");
    scan->add_option("--n", cfg.n, "Number of interior jumps");
    scan->add_option("--c1", cfg.c1, "Odd-layer speed");
    scan->add_option("--c2", cfg.c2, "Even-layer speed");
    scan->add_option("--seed", cfg.seed, "Sampling seed")->required();
    scan->add_option("--samples", cfg.samples, "Perturbed samples (default 100)");
    scan->add_option("--jitter", cfg.jitter, "Relative jitter amplitude");
    scan->add_option("--output-dir", cfg.output_dir, "Write scan.csv here instead of standard output");

    auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
    verify->add_option("--suite", cfg.suite, "oracle, bounds, figures, specfun, whisper or all");
    verify->add_option("--output-dir", cfg.output_dir, "Write verify.json (and beta_sweep.csv) here");

    auto* whisper = app.add_subcommand("whisper", "Whispering-gallery resonance scan for a single jump");
    whisper->add_option("--m", cfg.modes, "Modes to scan");
    whisper->add_option("--c1", cfg.wc1, "Inner speed");
    whisper->add_option("--c2", cfg.wc2, "Outer speed");
    whisper->add_option("--x1", cfg.x1, "Jump radius");
    whisper->add_option("--omega-window", cfg.omega_window, "Frequency window lo hi")->expected(2);
    whisper->add_option("--samples", cfg.samples, "Grid points (default 2001)");
    whisper->add_option("--output-dir", cfg.output_dir, "Write whisper.json here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    try {
        if (*solve) return cmd_solve(cfg);
        if (*construct) return cmd_construct(cfg);
        if (*scan) return cmd_scan(cfg);
        if (*verify) return cmd_verify(cfg);
        if (*whisper) return cmd_whisper(cfg);
    } catch (const Error& e) {
        // load_spec has already reported violations.
        if (e.kind() == ErrorKind::validation && std::string(e.what()) == "invalid problem spec") return exit_invalid;
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << dump_json({{"error", "internal"}, {"message", e.what()}});
        return exit_failed;
    }
    return exit_invalid;
}
