#pragma once

// Optimal NOMA design: maximize the strong user's effective throughput
// subject to T2_bar >= T0 and P1 + P2 <= P.
//
//   1. For a feasible P2, R2 is the smaller root of R2 (1 - eps2(R2)) = T0,
//      found by the fixed-point iteration R2 <- T0 / (1 - eps2(R2)).
//   2. R1 maximizes R1 (1 - eps_bar1) on [0, log2(1 + gamma1)]; the
//      derivative is decreasing on each side of log2(1 + gamma1'), so each
//      side is solved by bisection and the two candidates are compared.
//   3. P2 >= P2_l where P2_l makes max_R2 T2_bar equal to T0.
//   4. P1 = P - P2 and P2 in [P2_l, P] is found by a uniform scan refined
//      with golden-section search.

#include <optional>

#include "fblnoma/fbl.hpp"
#include "fblnoma/noma_model.hpp"
#include "fblnoma/parallel.hpp"

namespace fblnoma {

struct Tolerances {
    double rate_tol = 1e-9;          // bps/Hz, fixed-point stop rule and tie slack
    double power_tol_rel = 1e-6;     // power tolerance as a fraction of the budget
    double throughput_tol = 1e-7;    // bps/Hz
    int max_fixed_point_iters = 200;
    int max_bisection_iters = 200;

    /// Throws std::invalid_argument unless every field is strictly positive.
    void validate() const;
    double power_tol(double p_total) const { return power_tol_rel * p_total; }
};

struct NomaSearchOptions {
    int scan_points = 200;
    Execution exec = Execution::parallel;
};

struct NomaIterations {
    int p2_lower_bisection = 0;
    int fixed_point = 0;
    bool fixed_point_fallback = false;
    int r1_bisection = 0;
    int golden = 0;
    int scan_points = 0;
};

struct SolveReport {
    NomaDecision decision;
    NomaEvaluation evaluation;
    double objective = 0.0;  // T1_bar, 0 when infeasible
    bool feasible = false;
    NomaIterations iterations;
    bool convexity_gate = false;
    std::optional<double> p2_lower;  // P2_l when it exists
    double r2_stationary = 0.0;      // R2 maximizing T2_bar at the reported gamma2
};

/// R2 (1 - Q(f(gamma2, n, R2))).
double throughput_u2_of_r2(SnrValue gamma2, Blocklength n, Rate r2);

/// Analytic derivative of throughput_u2_of_r2 with respect to R2.
double d_throughput_u2_dr2(SnrValue gamma2, Blocklength n, Rate r2);

/// Stationary point of throughput_u2_of_r2 on (0, log2(1+gamma2)). When the
/// derivative is still positive at capacity (very low SNR) the constrained
/// maximizer log2(1+gamma2) is returned.
Rate r2_ddagger(SnrValue gamma2, Blocklength n, const Tolerances& tol = {});

struct FixedPointResult {
    Rate rate;
    int iterations = 0;
    bool used_fallback = false;
};

/// Smaller root of throughput_u2_of_r2(R2) = t0, or nullopt when
/// max_R2 throughput_u2_of_r2 < t0. Starts at R2 = t0; falls back to
/// bisection over [0, R2_ddagger] if the iteration does not settle.
std::optional<FixedPointResult> solve_r2_fixed_point(SnrValue gamma2, Blocklength n, double t0,
                                                     const Tolerances& tol = {});

/// d/dr [ r (1 - Q(f(x, n, r))) ] written as
/// 1 - Q(f) + r (df/dr) exp(-f^2/2) / sqrt(2 pi).
double u_condition(SnrValue x, Blocklength n, Rate r);

struct R1Result {
    Rate rate;
    double throughput = 0.0;  // R1 (1 - eps_bar1) at the returned rate
    bool second_branch = false;
    int iterations = 0;
};

/// Rate maximizing the strong user's effective throughput for fixed powers
/// and SIC outage eps21. Returns 0 when p1 == 0.
R1Result solve_r1_detailed(const ChannelGains& gains, double p1, double p2, Blocklength n,
                           ErrorProb eps21, const Tolerances& tol = {});
Rate solve_r1(const ChannelGains& gains, double p1, double p2, Blocklength n, ErrorProb eps21,
              const Tolerances& tol = {});

struct P2LowerBound {
    double p2 = 0.0;
    int iterations = 0;
};

/// Smallest P2 (with P1 = P - P2) for which max_R2 T2_bar reaches T0.
std::optional<P2LowerBound> p2_lower_bound_detailed(const ChannelGains& gains,
                                                    const SystemParams& params,
                                                    const Tolerances& tol = {});
std::optional<double> p2_lower_bound(const ChannelGains& gains, const SystemParams& params,
                                     const Tolerances& tol = {});

/// Sufficient condition for concavity of T1_bar in P1:
///   log2(1+gamma1') < R1 <= log2(1+gamma1) and
///   R2 <= min{log2(1+gamma2), log2(1+gamma21) - 2 / (n h1 ln2)}.
bool convexity_gate(const ChannelGains& gains, const NomaDecision& d, Blocklength n);

SolveReport optimize_noma(const ChannelGains& gains, const SystemParams& params,
                          const Tolerances& tol = {}, const NomaSearchOptions& opts = {});

// Partial optimizations used for the per-variable sweeps. Each fixes one
// variable and optimizes the rest; infeasible points report objective 0.

/// P2 fixed, P1 = P - P2, R2 and R1 optimal.
SolveReport noma_at_p2(const ChannelGains& gains, const SystemParams& params, double p2,
                       const Tolerances& tol = {});

/// R2 fixed, P2 the unique power giving T2_bar = T0 at that rate, R1 optimal.
SolveReport noma_at_r2(const ChannelGains& gains, const SystemParams& params, double r2,
                       const Tolerances& tol = {});

/// R1 fixed, P2 in [P2_l, P] searched, R2 optimal.
SolveReport noma_at_r1(const ChannelGains& gains, const SystemParams& params, double r1,
                       const Tolerances& tol = {}, const NomaSearchOptions& opts = {});

namespace detail {

// Raw-double kernels shared with the OMA solver.
double throughput_raw(double gamma, double n, double r);
double u_condition_raw(double x, double n, double r);

struct Stationary {
    double rate = 0.0;
    double throughput = 0.0;
    int iterations = 0;
};
// Maximizer of r (1 - Q(f(gamma, n, r))) on [0, log2(1+gamma)]; gamma > 0.
Stationary stationary_rate(double gamma, double n, const Tolerances& tol);

}  // namespace detail

}  // namespace fblnoma
