// Acceptance gate. Prints one PASS/FAIL line per criterion; `--only N` runs a
// single criterion. Exit status is nonzero when any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fblnoma/experiments.hpp"
#include "fblnoma/oracle.hpp"

using namespace fblnoma;

namespace {

__attribute__((format(printf, 1, 2))) void info(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    std::printf("    ");
    std::vprintf(fmt, args);
    std::printf("\n");
    std::fflush(stdout);
    va_end(args);
}

Setting fixed_setting(double h1, double h2, double snr_db, long n, double t0) {
    Setting s;
    s.fixed.h1_tilde_mag = h1;
    s.fixed.h2_tilde_mag = h2;
    s.snr_db = snr_db;
    s.n = n;
    s.t0 = t0;
    return s;
}

double noma_value(const Setting& s) { return optimize_noma(fixed_gains(s), system_params(s)).objective; }
double oma_value(const Setting& s) { return optimize_oma(fixed_gains(s), system_params(s)).objective(); }

// Rows of a sweep for one scheme column, in sweep order.
std::vector<ResultRow> column(const std::vector<ResultRow>& rows, const std::string& scheme) {
    std::vector<ResultRow> out;
    for (const auto& r : rows) {
        if (r.scheme == scheme) out.push_back(r);
    }
    return out;
}

bool criterion1() {
    const double expected = 6.51;
    const auto noma = noma_value(fixed_setting(0.8, 0.4, 30.0, 100, 2.0));
    const auto oma560 = oma_value(fixed_setting(0.8, 0.4, 30.0, 560, 2.0));
    const double rel = std::abs(noma - oma560) / noma;
    info("NOMA N=100: %.4f  OMA N=560: %.4f  relative gap %.3f%%", noma, oma560, 100 * rel);

    long coarse = -1;
    for (long n = 100; n <= 1000 && coarse < 0; n += 10) {
        if (oma_value(fixed_setting(0.8, 0.4, 30.0, n, 2.0)) >= noma) coarse = n;
    }
    long first = -1;
    if (coarse > 0) {
        for (long n = std::max(100L, coarse - 9); n <= coarse && first < 0; ++n) {
            if (oma_value(fixed_setting(0.8, 0.4, 30.0, n, 2.0)) >= noma) first = n;
        }
    }
    info("first OMA blocklength reaching the NOMA N=100 value: %ld", first);
    const bool near_expected = std::abs(noma - expected) <= 0.02 * expected && std::abs(oma560 - expected) <= 0.02 * expected;
    return rel <= 0.02 && near_expected && first >= 500 && first <= 620;
}

bool criterion2() {
    const auto& fig7 = preset("fig7");
    const auto noma50 = noma_value(fixed_setting(0.8, 0.1, 40.0, 50, fig7.base.t0));
    const auto oma2000 = oma_value(fixed_setting(0.8, 0.1, 40.0, 2000, fig7.base.t0));
    info("T0=%g  NOMA N=50: %.4f  OMA N=2000: %.4f", fig7.base.t0, noma50, oma2000);
    return noma50 >= 9.5 * 0.98 && oma2000 < noma50;
}

bool criterion3() {
    const double tol = Tolerances{}.throughput_tol;
    bool all = true;
    for (const char* name : {"fig4", "fig5", "fig7", "fig8", "fig9"}) {
        const auto& spec = preset(name);
        const auto rows = run_sweep(spec);
        std::vector<std::string> labels;
        for (const auto& s : spec.series) labels.push_back("|" + s.label);
        if (labels.empty()) labels.push_back("");
        int points = 0, bad_noma = 0, bad_fixed = 0;
        double worst = 0.0, worst_at = 0.0;
        for (const auto& l : labels) {
            const auto a = column(rows, "noma" + l), b = column(rows, "oma" + l), c = column(rows, "oma-fixed" + l);
            for (std::size_t i = 0; i < a.size(); ++i) {
                ++points;
                if (a[i].objective < b[i].objective - tol) {
                    ++bad_noma;
                    if (b[i].objective - a[i].objective > worst) {
                        worst = b[i].objective - a[i].objective;
                        worst_at = a[i].value;
                    }
                }
                if (b[i].objective < c[i].objective - tol) ++bad_fixed;
            }
        }
        const bool ok = bad_noma == 0 && bad_fixed == 0;
        info("%s: %d points, NOMA<OMA at %d, OMA<fixed at %d%s", name, points, bad_noma, bad_fixed,
             ok ? "" : " (violations)");
        if (bad_noma > 0) info("%s: largest OMA excess %.4f at %s=%g", name, worst, sweep_var_name(spec.var), worst_at);
        if (std::string(name) == "fig4") {
            auto peak = [](const std::vector<ResultRow>& c) {
                return *std::max_element(c.begin(), c.end(),
                                         [](const auto& x, const auto& y) { return x.objective < y.objective; });
            };
            const auto pn = peak(column(rows, "noma")), po = peak(column(rows, "oma")),
                       pf = peak(column(rows, "oma-fixed"));
            info("fig4 peaks: NOMA %.4f at R1=%g, OMA %.4f at R1=%g, fixed %.4f at R1=%g", pn.objective, pn.value,
                 po.objective, po.value, pf.objective, pf.value);
        }
        all = all && ok;
    }
    return all;
}

bool criterion4() {
    bool ok = true;
    const Tolerances tol;

    const auto& fig2 = preset("fig2");
    const auto rows2 = run_sweep(fig2);
    for (const auto& se : fig2.series) {
        const auto s = apply_series(fig2.base, se);
        const auto params = system_params(s);
        const auto rep = optimize_noma(fixed_gains(s), params);
        const bool solver_ok = rep.feasible && rep.p2_lower && rep.decision.p2 > *rep.p2_lower + tol.power_tol(params.p_total);
        const auto c = column(rows2, "noma|" + se.label);
        const auto first = std::find_if(c.begin(), c.end(), [](const auto& r) { return r.feasible; });
        const auto best = std::max_element(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.objective < y.objective; });
        const bool sweep_ok = first != c.end() && best->value > first->value;
        info("fig2 %s: P2l=%.3f P2*=%.3f (sweep: first feasible %g, argmax %g)", se.label.c_str(),
             rep.p2_lower.value_or(NAN), rep.decision.p2, first != c.end() ? first->value : NAN, best->value);
        ok = ok && solver_ok && sweep_ok;
    }

    const auto& fig3 = preset("fig3");
    const auto rows3 = run_sweep(fig3);
    for (const auto& se : fig3.series) {
        const auto s = apply_series(fig3.base, se);
        const auto gains = fixed_gains(s);
        const auto params = system_params(s);
        const auto rep = optimize_noma(gains, params);
        if (!rep.feasible || !rep.p2_lower) {
            info("fig3 %s: infeasible", se.label.c_str());
            ok = false;
            continue;
        }
        const double r2_dd = noma_at_p2(gains, params, *rep.p2_lower).decision.r2;
        const auto c = column(rows3, "noma|" + se.label);
        const auto best = std::max_element(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.objective < y.objective; });
        info("fig3 %s: R2*=%.5f R2dd=%.5f (sweep argmax %g)", se.label.c_str(), rep.decision.r2, r2_dd, best->value);
        ok = ok && rep.decision.r2 < r2_dd - tol.rate_tol && best->value < r2_dd;
    }

    const auto& fig6 = preset("fig6");
    const auto rows6 = run_sweep(fig6);
    std::map<std::string, std::vector<long>> n1;
    for (const auto& se : fig6.series) {
        for (const auto& r : column(rows6, "oma|" + se.label)) n1[se.label].push_back(r.n1.value_or(-1));
    }
    for (const auto& se : fig6.series) {
        const auto& v = n1[se.label];
        const bool mono = std::is_sorted(v.begin(), v.end()) && v.front() > 0;
        info("fig6 %s: N1* from %ld to %ld, nondecreasing %s", se.label.c_str(), v.front(), v.back(), mono ? "yes" : "no");
        ok = ok && mono;
        for (const auto& other : fig6.series) {
            if (other.snr_db == se.snr_db && other.t0 > se.t0) {
                const auto& w = n1[other.label];
                bool dec = true;
                for (std::size_t i = 0; i < v.size(); ++i) dec = dec && w[i] < v[i];
                info("fig6 %s vs %s: N1* smaller at larger T0 at every N: %s", se.label.c_str(), other.label.c_str(),
                     dec ? "yes" : "no");
                ok = ok && dec;
            }
        }
    }
    return ok;
}

bool criterion5() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> snr(20.0, 40.0), t0(0.5, 3.0), mag1(0.3, 1.0),
        log_ratio(std::log(4.0), std::log(100.0));
    std::uniform_int_distribution<long> nd(100, 500);
    const GridSpec grid{150, 150, 150};
    int agree = 0, total = 0, feasible = 0;
    double worst = 0.0;
    for (int i = 0; feasible < 20 && i < 100; ++i) {
        const double h1 = mag1(rng);
        const double h2 = h1 / std::sqrt(std::exp(log_ratio(rng)));
        const auto s = fixed_setting(h1, h2, snr(rng), nd(rng), t0(rng));
        const auto gains = fixed_gains(s);
        const auto params = system_params(s);

        const double sn = optimize_noma(gains, params).objective;
        const auto on = grid_optimize_noma(gains, params, grid);
        const double so = optimize_oma(gains, params).objective();
        const auto oo = grid_optimize_oma(gains, params, GridSpec{100, 100, 100});

        if (on.report.feasible) ++feasible;
        for (auto [solver, oracle, slack] : {std::tuple{sn, on.report.objective, on.resolution_slack},
                                             std::tuple{so, oo.solution.objective(), oo.resolution_slack}}) {
            const double allowed = std::max(0.005 * oracle, slack);
            const double dev = std::abs(solver - oracle);
            ++total;
            if (dev <= allowed) ++agree;
            worst = std::max(worst, allowed > 0.0 ? dev / allowed : (dev > 0.0 ? INFINITY : 0.0));
        }
        info("instance %2d: N=%ld T0=%.2f  NOMA %.4f vs grid %.4f  OMA %.4f vs grid %.4f", i, s.n, s.t0, sn,
             on.report.objective, so, oo.solution.objective());
    }
    info("%d of %d comparisons within max(0.5%%, slack), %d instances feasible on the grid; worst deviation / "
         "allowance %.3f",
         agree, total, feasible, worst);
    return agree == total && feasible >= 20;
}

bool criterion6() {
    struct Suite {
        const char* what;
        const char* binary;
        const char* filter;
    };
    const std::vector<Suite> suites{
        {"error probability decreasing in SNR", FBLNOMA_TEST_FBL, "FblProperties.ErrorDecreasesWithSnr"},
        {"error probability increasing in rate", FBLNOMA_TEST_FBL, "FblProperties.ErrorIncreasesWithRate"},
        {"concavity of weak-user throughput in R2", FBLNOMA_TEST_NOMA_OPT, "ThroughputU2.Concave"},
        {"concavity in R1 on each branch", FBLNOMA_TEST_NOMA_OPT, "SolveR1.ConcaveOnEachBranch"},
        {"fixed-point map is a contraction", FBLNOMA_TEST_NOMA_OPT, "SolveR2FixedPoint.MapIsContraction"},
        {"concavity in P1 where the gate holds", FBLNOMA_TEST_NOMA_OPT, "OptimizeNoma.ConcaveInP1WhereGateHolds"},
        {"power budget and target active", FBLNOMA_TEST_NOMA_OPT, "OptimizeNoma.ActiveConstraintsOnRandomInstances"},
        {"throughput derivative vs finite difference", FBLNOMA_TEST_NOMA_OPT, "DThroughputU2.MatchesFiniteDifference"},
        {"first-order condition vs finite difference", FBLNOMA_TEST_NOMA_OPT,
         "UCondition.DecreasingAndMatchesDerivative"},
    };
    bool ok = true;
    for (const auto& s : suites) {
        const std::string cmd = std::string(s.binary) + " --gtest_filter=" + s.filter + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        const bool pass = WIFEXITED(status) && WEXITSTATUS(status) == 0;
        info("%-45s %s", s.what, pass ? "pass" : "FAIL");
        ok = ok && pass;
    }
    return ok;
}

struct McPoint {
    double snr_db;
    MonteCarloResult noma, oma, fixed;
};

std::vector<McPoint> fading_points(const std::vector<double>& snrs, long realizations) {
    auto scenario = preset("fig9").base.fading_scenario;
    scenario.realizations = realizations;
    const auto& base = preset("fig9").base;
    std::vector<McPoint> out;
    for (double snr : snrs) {
        Setting s = base;
        s.snr_db = snr;
        const auto params = system_params(s);
        McPoint p{snr, {}, {}, {}};
        p.noma = monte_carlo_average(scenario, params, Scheme::noma);
        p.oma = monte_carlo_average(scenario, params, Scheme::oma);
        p.fixed = monte_carlo_average(scenario, params, Scheme::oma_fixed);
        info("snr %5.1f dB: NOMA %.4f (se %.4f)  OMA %.4f (se %.4f)  fixed %.4f (se %.4f)", snr, p.noma.mean,
             p.noma.std_error, p.oma.mean, p.oma.std_error, p.fixed.mean, p.fixed.std_error);
        out.push_back(p);
    }
    return out;
}

bool fading_trends(const std::vector<McPoint>& pts) {
    bool ok = true;
    double prev_gap = -INFINITY;
    for (const auto& p : pts) {
        const double se = std::hypot(p.noma.std_error, p.oma.std_error);
        ok = ok && p.noma.mean - p.oma.mean > 2.0 * se;
        const double gap = p.noma.mean - p.fixed.mean;
        ok = ok && gap > prev_gap;
        prev_gap = gap;
    }
    return ok;
}

bool criterion7() {
    const bool ok = fading_trends(fading_points({20.0, 30.0, 40.0}, 2000));
    info("informational run at 80/90/100 dB with the same geometry:");
    const bool hi = fading_trends(fading_points({80.0, 90.0, 100.0}, 2000));
    info("trends at 80/90/100 dB: %s", hi ? "hold" : "do not hold");
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion (1-7)")->check(CLI::Range(0, 7));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<bool()>>> criteria{
        {"fixed-gain latency: NOMA N=100 matches OMA N=560", criterion1},
        {"short blocklength: NOMA at N=50 beats OMA at N=2000", criterion2},
        {"pointwise dominance NOMA >= OMA >= fixed-slot OMA", criterion3},
        {"structural observations on power, rate and slot presets", criterion4},
        {"solver agrees with brute-force grid on random instances", criterion5},
        {"property suites", criterion6},
        {"fading Monte Carlo trends at 20/30/40 dB", criterion7},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        std::printf("criterion %zu: %s\n", i + 1, criteria[i].first);
        std::fflush(stdout);
        bool ok = false;
        try {
            ok = criteria[i].second();
        } catch (const std::exception& e) {
            info("exception: %s", e.what());
        }
        std::printf("%s criterion %zu: %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first);
        std::fflush(stdout);
        failed += ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
