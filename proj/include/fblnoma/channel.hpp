#pragma once

// Channel-gain scenarios: fixed coefficient magnitudes, and Rayleigh fading
// with distance path loss for Monte Carlo averages.

#include <cstdint>
#include <vector>

#include "fblnoma/noma_model.hpp"
#include "fblnoma/noma_opt.hpp"
#include "fblnoma/parallel.hpp"

namespace fblnoma {

double db_to_linear(double x_db);
double linear_to_db(double x);

/// Fixed channel magnitudes |h_i| and noise powers; gains are |h_i|^2 / sigma_i^2.
struct ScenarioFixed {
    double h1_tilde_mag = 0.8;
    double h2_tilde_mag = 0.2;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;

    /// Throws std::invalid_argument unless the derived gains satisfy h1 > h2 > 0.
    ChannelGains gains() const;
};

/// h_i = d_i^-alpha * hbar_i with hbar_i ~ CN(0, 1), so the power gain is
/// d_i^(-2 alpha) |hbar_i|^2 / sigma_i^2.
struct ScenarioFading {
    double d1 = 20.0;
    double d2 = 60.0;
    double alpha = 2.0;
    std::uint64_t seed = 1;
    long realizations = 1000;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;

    void validate() const;
};

/// Gains of realization `index`. Each (seed, index) pair seeds its own
/// generator, so draws do not depend on evaluation order or thread count.
/// If a draw gives h1 <= h2 the labels are swapped so user 1 is stronger.
ChannelGains sample_fading_pair(const ScenarioFading& scenario, long index);

/// Raw |hbar_1|^2, |hbar_2|^2 of a realization, before path loss and
/// relabeling.
struct FadingDraw {
    double mag1_sq = 0.0;
    double mag2_sq = 0.0;
};
FadingDraw sample_fading_draw(const ScenarioFading& scenario, long index);

enum class Scheme { noma, oma, oma_fixed };

const char* scheme_name(Scheme s);

struct MonteCarloResult {
    double mean = 0.0;
    double std_error = 0.0;
    long realizations = 0;
    long feasible = 0;
    std::vector<double> objectives;  // per realization, index order
};

/// Solves every realization with the chosen scheme (infeasible counts as 0)
/// and reports the mean and its standard error. Realizations are evaluated
/// independently; the sums are taken in index order, so the result does not
/// depend on `exec`.
MonteCarloResult monte_carlo_average(const ScenarioFading& scenario, const SystemParams& params,
                                     Scheme scheme, const Tolerances& tol = {},
                                     Execution exec = Execution::parallel,
                                     int noma_scan_points = 200);

}  // namespace fblnoma
