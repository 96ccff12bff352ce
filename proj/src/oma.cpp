#include "fblnoma/oma.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "fblnoma/numerics.hpp"

namespace fblnoma {

double oma_throughput(double h, double p, Blocklength n_i, Blocklength n_total, Rate r) {
    if (!(p >= 0.0) || !(h > 0.0)) throw std::invalid_argument("oma_throughput: need p >= 0, h > 0");
    if (p == 0.0 && r.value() > 0.0) {
        throw std::invalid_argument("oma_throughput: p == 0 requires r == 0");
    }
    if (r.value() == 0.0) return 0.0;
    const double frac = n_i.as_double() / n_total.as_double();
    return frac * detail::throughput_raw(p * h, n_i.as_double(), r.value());
}

std::optional<OmaStep1> oma_step1_p2_r2(double h2, Blocklength n2, Blocklength n_total, double t0,
                                        double p_cap, const Tolerances& tol) {
    if (!(t0 >= 0.0)) throw std::invalid_argument("oma_step1_p2_r2: t0 must be >= 0");
    if (t0 == 0.0) return OmaStep1{0.0, 0.0};
    const double frac = n2.as_double() / n_total.as_double();
    const double nd = n2.as_double();
    auto peak = [&](double p2) { return frac * detail::stationary_rate(p2 * h2, nd, tol).throughput; };

    double hi = p_cap;
    double peak_hi = peak(hi);
    if (peak_hi < t0) return std::nullopt;
    double lo = 0.0;
    for (int it = 0; it < tol.max_bisection_iters; ++it) {
        if ((hi - lo) <= tol.power_tol(p_cap) && peak_hi - t0 <= tol.throughput_tol) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double pm = peak(mid);
        if (pm >= t0) {
            hi = mid;
            peak_hi = pm;
        } else {
            lo = mid;
        }
    }
    return OmaStep1{hi, detail::stationary_rate(hi * h2, nd, tol).rate};
}

Rate oma_step2_r1(double h1, double p1, Blocklength n1, const Tolerances& tol) {
    if (!(p1 >= 0.0)) throw std::invalid_argument("oma_step2_r1: p1 must be >= 0");
    if (p1 == 0.0) return Rate(0.0);
    return Rate(detail::stationary_rate(p1 * h1, n1.as_double(), tol).rate);
}

namespace {

// Steps 1-2 for a split; `fixed_r1` skips the rate optimization of user 1.
OmaSolution solve_split(const ChannelGains& gains, const SystemParams& params, long n2,
                        const Tolerances& tol, std::optional<double> fixed_r1) {
    OmaSolution sol;
    const long n = params.n.value();
    const long n1 = n - n2;
    if (n1 < 1 || n2 < 1) return sol;
    const double energy = static_cast<double>(n) * params.p_total;

    const auto step1 = oma_step1_p2_r2(gains.h2(), Blocklength(n2), params.n, params.t0,
                                       energy / static_cast<double>(n2), tol);
    if (!step1) return sol;

    OmaDecision& d = sol.decision;
    d.n1 = n1;
    d.n2 = n2;
    d.p2 = step1->p2;
    d.r2 = step1->r2;
    d.p1 = std::max(0.0, (energy - static_cast<double>(n2) * d.p2) / static_cast<double>(n1));
    if (fixed_r1) {
        d.r1 = d.p1 > 0.0 ? *fixed_r1 : 0.0;
    } else {
        d.r1 = oma_step2_r1(gains.h1(), d.p1, Blocklength(n1), tol).value();
    }
    sol.feasible = true;
    sol.t1_bar = oma_throughput(gains.h1(), d.p1, Blocklength(n1), params.n, Rate(d.r1));
    sol.t2_bar = oma_throughput(gains.h2(), d.p2, Blocklength(n2), params.n, Rate(d.r2));
    return sol;
}

OmaSolution best_of(std::span<const OmaSolution> profile) {
    if (profile.empty()) return {};
    const auto i = first_argmax(profile, [](const OmaSolution& s) {
        // Infeasible splits rank below every feasible one, including T1_bar = 0.
        return s.feasible ? s.t1_bar : -1.0;
    });
    return profile[i];
}

std::vector<OmaSolution> profile_with(const ChannelGains& gains, const SystemParams& params,
                                      const Tolerances& tol, const OmaSearchOptions& opts,
                                      std::optional<double> fixed_r1) {
    const long n = params.n.value();
    if (n < 2) throw std::invalid_argument("OMA requires N >= 2");
    return parallel_map<OmaSolution>(static_cast<std::size_t>(n - 1), opts.exec, [&](std::size_t i) {
        return solve_split(gains, params, static_cast<long>(i) + 1, tol, fixed_r1);
    });
}

}  // namespace

OmaSolution oma_for_split(const ChannelGains& gains, const SystemParams& params, long n2,
                          const Tolerances& tol) {
    return solve_split(gains, params, n2, tol, std::nullopt);
}

std::vector<OmaSolution> oma_split_profile(const ChannelGains& gains, const SystemParams& params,
                                           const Tolerances& tol, const OmaSearchOptions& opts) {
    return profile_with(gains, params, tol, opts, std::nullopt);
}

OmaSolution optimize_oma(const ChannelGains& gains, const SystemParams& params,
                         const Tolerances& tol, const OmaSearchOptions& opts) {
    tol.validate();
    const auto profile = oma_split_profile(gains, params, tol, opts);
    return best_of(profile);
}

OmaSolution optimize_oma_fixed_slots(const ChannelGains& gains, const SystemParams& params,
                                     const Tolerances& tol) {
    tol.validate();
    const long n = params.n.value();
    if (n < 2) throw std::invalid_argument("OMA requires N >= 2");
    return solve_split(gains, params, n / 2, tol, std::nullopt);
}

OmaSolution oma_at_r1(const ChannelGains& gains, const SystemParams& params, double r1,
                      bool fixed_slots, const Tolerances& tol, const OmaSearchOptions& opts) {
    if (!(r1 >= 0.0)) throw std::invalid_argument("oma_at_r1: r1 must be >= 0");
    if (fixed_slots) return solve_split(gains, params, params.n.value() / 2, tol, r1);
    const auto profile = profile_with(gains, params, tol, opts, r1);
    return best_of(profile);
}

}  // namespace fblnoma
