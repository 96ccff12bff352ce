#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "fblnoma/experiments.hpp"
#include "fblnoma/oracle.hpp"
#include "sweep_config.hpp"

using namespace fblnoma;

namespace {

constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;

// Flags shared by solve, sweep and oracle-check. Unset flags leave the
// config value alone.
struct Overrides {
    std::optional<double> h1, h2, snr_db, t0;
    std::optional<long> n;

    void add(CLI::App* app) {
        app->add_option("--h1", h1, "Magnitude |h1| of the strong user's coefficient");
        app->add_option("--h2", h2, "Magnitude |h2| of the weak user's coefficient");
        app->add_option("--snr-db", snr_db, "Average transmit SNR in dB");
        app->add_option("--n", n, "Blocklength (channel uses)");
        app->add_option("--t0", t0, "Throughput target of user 2 (bps/Hz)");
    }
    void apply(Setting& s) const {
        if (h1) s.fixed.h1_tilde_mag = *h1;
        if (h2) s.fixed.h2_tilde_mag = *h2;
        if (snr_db) s.snr_db = *snr_db;
        if (n) s.n = *n;
        if (t0) s.t0 = *t0;
    }
};

ChannelGains checked_gains(const Setting& s) {
    if (!(s.fixed.h1_tilde_mag > 0.0)) throw ConfigError("h1", "must be > 0");
    if (!(s.fixed.h2_tilde_mag > 0.0)) throw ConfigError("h2", "must be > 0");
    try {
        return fixed_gains(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("h2", std::string("strong user must be user 1 (") + e.what() + ")");
    }
}

SweepSpec base_spec(const std::string& preset_name, const std::string& config) {
    SweepSpec spec;
    if (!preset_name.empty()) spec = preset(preset_name);
    if (!config.empty()) spec = load_sweep_config(config, spec);
    return spec;
}

void print_row(std::ostream& os, const ResultRow& r) {
    os << r.scheme << ": " << (r.feasible ? "feasible" : "infeasible") << "\n";
    auto line = [&](const char* name, const auto& v) {
        if (v) os << "  " << name << " = " << *v << "\n";
    };
    os.precision(10);
    os << "  T1_bar = " << r.objective << "\n";
    line("T2_bar", r.t2_bar);
    line("P1", r.p1);
    line("P2", r.p2);
    line("R1", r.r1);
    line("R2", r.r2);
    line("N1", r.n1);
    line("N2", r.n2);
}

int run_solve(const std::string& config, const Overrides& ov, const std::string& scheme,
              const std::string& csv_path) {
    SweepSpec spec = base_spec("", config);
    ov.apply(spec.base);
    if (spec.base.fading) throw ConfigError("scenario.type", "solve needs a fixed scenario");
    checked_gains(spec.base);
    if (spec.base.n < 1) throw ConfigError("n", "must be >= 1");
    if (!(spec.base.t0 >= 0.0)) throw ConfigError("t0", "must be >= 0");
    std::vector<Scheme> schemes;
    if (scheme == "all") {
        schemes = {Scheme::noma, Scheme::oma, Scheme::oma_fixed};
    } else {
        schemes = {parse_scheme(scheme)};
    }
    spec.var = SweepVar::t0;
    std::vector<ResultRow> rows;
    bool all_feasible = true;
    for (auto s : schemes) {
        ResultRow r;
        try {
            r = solve_point(spec, spec.base, spec.base.t0, s, Execution::parallel);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("n", e.what());
        }
        print_row(std::cout, r);
        all_feasible = all_feasible && r.feasible;
        rows.push_back(r);
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ConfigError("csv", "cannot write '" + csv_path + "'");
        write_csv(out, rows);
    }
    return all_feasible ? 0 : kInfeasible;
}

struct SweepFlags {
    std::string preset, config, csv = "-", svg, var, schemes;
    std::optional<double> start, stop;
    std::optional<int> points, scan_points;
    std::optional<std::uint64_t> seed;
    std::optional<long> realizations;
    bool serial = false;
};

int run_sweep_cmd(const SweepFlags& f, const Overrides& ov) {
    SweepSpec spec = base_spec(f.preset, f.config);
    ov.apply(spec.base);
    if (!f.var.empty()) spec.var = parse_sweep_var(f.var);
    if (f.start) spec.start = *f.start;
    if (f.stop) spec.stop = *f.stop;
    if (f.points) spec.points = *f.points;
    if (f.scan_points) spec.noma_scan_points = *f.scan_points;
    if (f.seed) spec.base.fading_scenario.seed = *f.seed;
    if (f.realizations) spec.base.fading_scenario.realizations = *f.realizations;
    if (!f.schemes.empty()) {
        spec.schemes.clear();
        std::stringstream ss(f.schemes);
        for (std::string s; std::getline(ss, s, ',');) spec.schemes.push_back(parse_scheme(s));
    }
    spec.validate();

    const auto rows = run_sweep(spec, f.serial ? Execution::serial : Execution::parallel);
    std::ostringstream csv;
    write_csv(csv, rows);
    if (f.csv == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(f.csv, std::ios::binary);
        if (!out) throw ConfigError("csv", "cannot write '" + f.csv + "'");
        out << csv.str();
    }
    if (!f.svg.empty()) {
        try {
            std::istringstream in(csv.str());
            std::ofstream out(f.svg, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write '" + f.svg + "'");
            write_svg(out, read_csv(in), spec.name.empty() ? "sweep" : spec.name);
        } catch (const std::exception& e) {
            std::cerr << "warning: plot not written: " << e.what() << "\n";
        }
    }
    return 0;
}

struct OracleFlags {
    std::string scheme = "noma";
    int grid = 100;
    int random = 0;
    std::uint64_t seed = 1;
};

int run_oracle_check(const OracleFlags& f, const Overrides& ov) {
    const Scheme scheme = parse_scheme(f.scheme);
    if (f.grid < 2) throw ConfigError("grid", "must be >= 2");
    if (f.random < 0) throw ConfigError("random", "must be >= 0");
    const GridSpec grid{f.grid, f.grid, f.grid};

    std::vector<Setting> cases;
    if (f.random == 0) {
        Setting s;
        s.fixed.h1_tilde_mag = 0.8;
        s.fixed.h2_tilde_mag = 0.2;
        ov.apply(s);
        checked_gains(s);
        cases.push_back(s);
    } else {
        std::mt19937_64 rng(f.seed);
        std::uniform_real_distribution<double> snr(20.0, 40.0), h1(0.3, 1.0), ratio(0.1, 0.5), t0(0.5, 3.0);
        std::uniform_int_distribution<long> n(50, 400);
        for (int i = 0; i < f.random; ++i) {
            Setting s;
            s.fixed.h1_tilde_mag = h1(rng);
            s.fixed.h2_tilde_mag = s.fixed.h1_tilde_mag * ratio(rng);
            s.snr_db = snr(rng);
            s.n = n(rng);
            s.t0 = t0(rng);
            cases.push_back(s);
        }
    }

    double max_dev = 0.0;
    int violations = 0;
    std::printf("%-4s %10s %10s %6s %6s %12s %12s %10s %10s\n", "case", "|h1|", "|h2|", "snr", "n", "solver",
                "oracle", "dev", "slack");
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& s = cases[i];
        const auto gains = checked_gains(s);
        const auto params = system_params(s);
        double solver = 0.0, oracle = 0.0, slack = 0.0;
        if (scheme == Scheme::noma) {
            solver = optimize_noma(gains, params).objective;
            const auto o = grid_optimize_noma(gains, params, grid);
            oracle = o.report.objective;
            slack = o.resolution_slack;
        } else {
            const bool fixed = scheme == Scheme::oma_fixed;
            solver = fixed ? optimize_oma_fixed_slots(gains, params).objective()
                           : optimize_oma(gains, params).objective();
            const auto o = grid_optimize_oma(gains, params, grid,
                                             fixed ? std::optional<long>(s.n / 2) : std::nullopt);
            oracle = o.solution.objective();
            slack = o.resolution_slack;
        }
        const double dev = std::abs(solver - oracle);
        max_dev = std::max(max_dev, dev);
        if (dev > std::max(0.005 * oracle, slack)) ++violations;
        std::printf("%-4zu %10.4f %10.4f %6.1f %6ld %12.6f %12.6f %10.3g %10.3g\n", i, s.fixed.h1_tilde_mag,
                    s.fixed.h2_tilde_mag, s.snr_db, s.n, solver, oracle, dev, slack);
    }
    std::printf("max deviation: %.6g bps/Hz (%d of %zu outside max(0.5%%, slack))\n", max_dev, violations,
                cases.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();
    CLI::App app{"Finite-blocklength NOMA / OMA throughput optimizer"};
    app.require_subcommand(1);

    Overrides solve_ov, sweep_ov, oracle_ov;
    std::string solve_config, solve_scheme = "noma", solve_csv;
    auto* solve = app.add_subcommand("solve", "Optimize a single fixed-gain instance");
    solve->add_option("--config", solve_config, "YAML config (scenario and system sections)");
    solve->add_option("--scheme", solve_scheme, "noma, oma, oma-fixed or all");
    solve->add_option("--csv", solve_csv, "Also write the result rows as CSV");
    solve_ov.add(solve);

    SweepFlags sf;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV and SVG");
    sweep->add_option("--preset", sf.preset, "Start from a built-in preset (fig2 ... fig9)");
    sweep->add_option("--config", sf.config, "YAML sweep description; flags override it");
    sweep->add_option("--csv", sf.csv, "CSV output path, '-' for stdout");
    sweep->add_option("--svg", sf.svg, "SVG plot output path");
    sweep->add_option("--var", sf.var, "Sweep variable: p2, r2, r1, t0, n, snr_db");
    sweep->add_option("--start", sf.start);
    sweep->add_option("--stop", sf.stop);
    sweep->add_option("--points", sf.points);
    sweep->add_option("--schemes", sf.schemes, "Comma separated subset of noma,oma,oma-fixed");
    sweep->add_option("--scan-points", sf.scan_points, "Coarse NOMA power scan size");
    sweep->add_option("--seed", sf.seed, "Fading seed");
    sweep->add_option("--realizations", sf.realizations, "Fading realizations per point");
    sweep->add_flag("--serial", sf.serial, "Run on one thread");
    sweep_ov.add(sweep);

    auto* list = app.add_subcommand("presets", "List the built-in presets");

    OracleFlags of;
    auto* oracle = app.add_subcommand("oracle-check", "Compare the solver with the brute-force grid");
    oracle->add_option("--scheme", of.scheme, "noma, oma or oma-fixed");
    oracle->add_option("--grid", of.grid, "Grid points per axis");
    oracle->add_option("--random", of.random, "Number of random instances instead of one fixed instance");
    oracle->add_option("--seed", of.seed, "Seed for --random");
    oracle_ov.add(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*solve) return run_solve(solve_config, solve_ov, solve_scheme, solve_csv);
        if (*sweep) return run_sweep_cmd(sf, sweep_ov);
        if (*list) {
            for (const auto& p : presets()) std::cout << describe(p) << "\n";
            return 0;
        }
        if (*oracle) return run_oracle_check(of, oracle_ov);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return 0;
}
