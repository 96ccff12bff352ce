#include "fblnoma/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>

#include "fblnoma/oma.hpp"

namespace fblnoma {

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

ChannelGains ScenarioFixed::gains() const {
    if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) {
        throw std::invalid_argument("ScenarioFixed: noise powers must be > 0");
    }
    return ChannelGains(h1_tilde_mag * h1_tilde_mag / sigma1_sq,
                        h2_tilde_mag * h2_tilde_mag / sigma2_sq);
}

void ScenarioFading::validate() const {
    if (!(d1 > 0.0) || !(d2 > d1)) throw std::invalid_argument("ScenarioFading: need 0 < d1 < d2");
    if (!(alpha > 0.0)) throw std::invalid_argument("ScenarioFading: alpha must be > 0");
    if (realizations < 1) throw std::invalid_argument("ScenarioFading: realizations must be >= 1");
    if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) {
        throw std::invalid_argument("ScenarioFading: noise powers must be > 0");
    }
}

FadingDraw sample_fading_draw(const ScenarioFading& scenario, long index) {
    if (index < 0) throw std::invalid_argument("sample_fading_draw: index must be >= 0");
    const auto idx = static_cast<std::uint64_t>(index);
    std::seed_seq seq{static_cast<std::uint32_t>(scenario.seed),
                      static_cast<std::uint32_t>(scenario.seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    std::mt19937_64 rng(seq);
    // CN(0, 1): real and imaginary parts each N(0, 1/2).
    std::normal_distribution<double> component(0.0, std::sqrt(0.5));
    FadingDraw d;
    const double a = component(rng);
    const double b = component(rng);
    const double c = component(rng);
    const double e = component(rng);
    d.mag1_sq = a * a + b * b;
    d.mag2_sq = c * c + e * e;
    return d;
}

ChannelGains sample_fading_pair(const ScenarioFading& scenario, long index) {
    if (index >= scenario.realizations) {
        throw std::invalid_argument("sample_fading_pair: index out of range");
    }
    const auto draw = sample_fading_draw(scenario, index);
    double h1 = std::pow(scenario.d1, -2.0 * scenario.alpha) * draw.mag1_sq / scenario.sigma1_sq;
    double h2 = std::pow(scenario.d2, -2.0 * scenario.alpha) * draw.mag2_sq / scenario.sigma2_sq;
    if (h1 < h2) std::swap(h1, h2);
    if (h1 == h2) h1 = std::nextafter(h1, INFINITY);
    // A zero draw has probability zero but would violate h2 > 0.
    if (!(h2 > 0.0)) h2 = std::numeric_limits<double>::min();
    return ChannelGains(h1, h2);
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::noma:
            return "noma";
        case Scheme::oma:
            return "oma";
        case Scheme::oma_fixed:
            return "oma-fixed";
    }
    return "?";
}

MonteCarloResult monte_carlo_average(const ScenarioFading& scenario, const SystemParams& params,
                                     Scheme scheme, const Tolerances& tol, Execution exec,
                                     int noma_scan_points) {
    scenario.validate();
    const auto count = static_cast<std::size_t>(scenario.realizations);
    struct Sample {
        double objective = 0.0;
        bool feasible = false;
    };
    // Solves inside one realization stay serial; the realizations are the
    // parallel dimension.
    const auto samples = parallel_map<Sample>(count, exec, [&](std::size_t i) {
        const ChannelGains g = sample_fading_pair(scenario, static_cast<long>(i));
        switch (scheme) {
            case Scheme::noma: {
                const auto r = optimize_noma(g, params, tol, {noma_scan_points, Execution::serial});
                return Sample{r.feasible ? r.objective : 0.0, r.feasible};
            }
            case Scheme::oma: {
                const auto r = optimize_oma(g, params, tol, {Execution::serial});
                return Sample{r.objective(), r.feasible};
            }
            case Scheme::oma_fixed: {
                const auto r = optimize_oma_fixed_slots(g, params, tol);
                return Sample{r.objective(), r.feasible};
            }
        }
        return Sample{};
    });

    MonteCarloResult out;
    out.realizations = scenario.realizations;
    out.objectives.reserve(count);
    for (const auto& s : samples) {
        out.objectives.push_back(s.objective);
        out.feasible += s.feasible ? 1 : 0;
    }
    const double n = static_cast<double>(count);
    out.mean = pairwise_sum(out.objectives) / n;
    if (count > 1) {
        std::vector<double> sq(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double dv = out.objectives[i] - out.mean;
            sq[i] = dv * dv;
        }
        const double var = pairwise_sum(sq) / (n - 1.0);
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

}  // namespace fblnoma
