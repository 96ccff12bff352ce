#pragma once

// Time-division OMA benchmark. User i gets N_i of the N channel uses with
// N1 + N2 = N and energy budget N1 P1 + N2 P2 <= N P. Effective throughput is
// (N_i / N) R_i (1 - Q(f(P_i h_i, N_i, R_i))).

#include <optional>
#include <utility>
#include <vector>

#include "fblnoma/fbl.hpp"
#include "fblnoma/noma_model.hpp"
#include "fblnoma/noma_opt.hpp"
#include "fblnoma/parallel.hpp"

namespace fblnoma {

struct OmaDecision {
    long n1 = 0;
    long n2 = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct OmaSolution {
    OmaDecision decision;
    double t1_bar = 0.0;
    double t2_bar = 0.0;
    bool feasible = false;
    double objective() const { return feasible ? t1_bar : 0.0; }
};

/// (n_i / n_total) r (1 - eps) with gamma = p h. p == 0 requires r == 0.
double oma_throughput(double h, double p, Blocklength n_i, Blocklength n_total, Rate r);

struct OmaStep1 {
    double p2 = 0.0;
    double r2 = 0.0;
};

/// Minimal P2 in (0, p_cap] such that max_R2 T2_bar = t0 in a slot of n2
/// uses, together with its maximizing R2. nullopt when p_cap is not enough.
std::optional<OmaStep1> oma_step1_p2_r2(double h2, Blocklength n2, Blocklength n_total, double t0,
                                        double p_cap, const Tolerances& tol = {});

/// Rate maximizing R (1 - Q(f(p1 h1, n1, R))). Returns 0 when p1 == 0.
Rate oma_step2_r1(double h1, double p1, Blocklength n1, const Tolerances& tol = {});

struct OmaSearchOptions {
    Execution exec = Execution::parallel;
};

/// Exhaustive search over N2 in {1, ..., N-1}. Requires N >= 2.
OmaSolution optimize_oma(const ChannelGains& gains, const SystemParams& params,
                         const Tolerances& tol = {}, const OmaSearchOptions& opts = {});

/// N1 = ceil(N/2), N2 = floor(N/2).
OmaSolution optimize_oma_fixed_slots(const ChannelGains& gains, const SystemParams& params,
                                     const Tolerances& tol = {});

/// Steps 1 and 2 for one slot split. Infeasible splits report feasible=false.
OmaSolution oma_for_split(const ChannelGains& gains, const SystemParams& params, long n2,
                          const Tolerances& tol = {});

/// Objective of every split N2 = 1..N-1 (index N2 - 1), for tracing.
std::vector<OmaSolution> oma_split_profile(const ChannelGains& gains, const SystemParams& params,
                                           const Tolerances& tol = {},
                                           const OmaSearchOptions& opts = {});

/// R1 fixed, slot split and powers optimized (fixed_slots restricts N2 to
/// floor(N/2)).
OmaSolution oma_at_r1(const ChannelGains& gains, const SystemParams& params, double r1,
                      bool fixed_slots, const Tolerances& tol = {},
                      const OmaSearchOptions& opts = {});

}  // namespace fblnoma
