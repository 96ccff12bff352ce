#include "fblnoma/noma_opt.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fblnoma/numerics.hpp"

namespace fblnoma {

void Tolerances::validate() const {
    if (!(rate_tol > 0.0) || !(power_tol_rel > 0.0) || !(throughput_tol > 0.0) ||
        max_fixed_point_iters <= 0 || max_bisection_iters <= 0) {
        throw std::invalid_argument("Tolerances: all fields must be strictly positive");
    }
}

namespace detail {

double throughput_raw(double gamma, double n, double r) {
    return r * q_complement(f_unchecked(gamma, n, r));
}

double u_condition_raw(double x, double n, double r) {
    const double f = f_unchecked(x, n, r);
    return q_complement(f) - r * f_rate_slope(x, n) * kInvSqrt2Pi * std::exp(-0.5 * f * f);
}

Stationary stationary_rate(double gamma, double n, const Tolerances& tol) {
    const double cap = capacity(gamma);
    Stationary s;
    if (u_condition_raw(gamma, n, cap) >= 0.0) {
        s.rate = cap;
    } else {
        // Bisect to full double precision: near the root the derivative has a
        // large slope, and callers check stationarity to ~1e-9.
        const auto b = bisect([&](double r) { return u_condition_raw(gamma, n, r); }, 0.0, cap,
                              0.0, tol.max_bisection_iters);
        s.rate = b.root();
        s.iterations = b.iterations;
    }
    s.throughput = throughput_raw(gamma, n, s.rate);
    return s;
}

}  // namespace detail

namespace {

double gamma2_of(const ChannelGains& g, double p1, double p2) {
    return p2 * g.h2() / (p1 * g.h2() + 1.0);
}

double gamma21_of(const ChannelGains& g, double p1, double p2) {
    return p2 * g.h1() / (p1 * g.h1() + 1.0);
}

double t1_of(double g1, double g1p, double n, double e21, double r) {
    const double e1 = detail::link_error(g1, n, r);
    const double e1p = detail::eps1_prime_raw(g1p, n, r);
    return r * (1.0 - (e1 - e1 * e21 + e21 * e1p));
}

}  // namespace

double throughput_u2_of_r2(SnrValue gamma2, Blocklength n, Rate r2) {
    if (gamma2.value() == 0.0) throw SingularityError("throughput_u2_of_r2: gamma2 must be > 0");
    return detail::throughput_raw(gamma2.value(), n.as_double(), r2.value());
}

double d_throughput_u2_dr2(SnrValue gamma2, Blocklength n, Rate r2) {
    if (gamma2.value() == 0.0) throw SingularityError("d_throughput_u2_dr2: gamma2 must be > 0");
    return detail::u_condition_raw(gamma2.value(), n.as_double(), r2.value());
}

double u_condition(SnrValue x, Blocklength n, Rate r) {
    if (x.value() == 0.0) throw SingularityError("u_condition: x must be > 0");
    return detail::u_condition_raw(x.value(), n.as_double(), r.value());
}

Rate r2_ddagger(SnrValue gamma2, Blocklength n, const Tolerances& tol) {
    if (gamma2.value() == 0.0) throw SingularityError("r2_ddagger: gamma2 must be > 0");
    return Rate(detail::stationary_rate(gamma2.value(), n.as_double(), tol).rate);
}

std::optional<FixedPointResult> solve_r2_fixed_point(SnrValue gamma2, Blocklength n, double t0,
                                                     const Tolerances& tol) {
    if (!(t0 >= 0.0)) throw std::invalid_argument("solve_r2_fixed_point: t0 must be >= 0");
    if (t0 == 0.0) return FixedPointResult{Rate(0.0), 0, false};
    if (gamma2.value() == 0.0) return std::nullopt;

    const double g = gamma2.value();
    const double nd = n.as_double();
    const auto peak = detail::stationary_rate(g, nd, tol);
    if (peak.throughput < t0) return std::nullopt;

    FixedPointResult res;
    double r = t0;
    bool converged = false;
    for (int k = 0; k < tol.max_fixed_point_iters; ++k) {
        const double next = t0 / q_complement(detail::f_unchecked(g, nd, r));
        res.iterations = k + 1;
        if (!std::isfinite(next) || next > peak.rate) break;
        const double step = std::abs(next - r);
        r = next;
        if (step < tol.rate_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // T(R2) - t0 is increasing on [0, R2_ddagger]; keep the side with T >= t0.
        const auto b = bisect([&](double x) { return detail::throughput_raw(g, nd, x) - t0; },
                              0.0, peak.rate, 0.0, tol.max_bisection_iters);
        r = b.hi;
        res.used_fallback = true;
        res.iterations += b.iterations;
    }
    res.rate = Rate(r);
    return res;
}

R1Result solve_r1_detailed(const ChannelGains& gains, double p1, double p2, Blocklength n,
                           ErrorProb eps21, const Tolerances& tol) {
    if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw std::invalid_argument("solve_r1: powers must be >= 0");
    R1Result out;
    if (p1 == 0.0) return out;

    const double nd = n.as_double();
    const double e21 = eps21.value();
    const double g1 = p1 * gains.h1();
    const double g1p = p1 * gains.h1() / (p2 * gains.h1() + 1.0);
    const double cap1 = capacity(g1);
    const double cap1p = capacity(g1p);

    // Branch 1: r <= log2(1 + gamma1'), both conditional decodes contribute.
    double a = 0.0;
    if (cap1p > 0.0) {
        auto d1 = [&](double r) {
            return (1.0 - e21) * detail::u_condition_raw(g1, nd, r) +
                   e21 * detail::u_condition_raw(g1p, nd, r);
        };
        if (d1(cap1p) >= 0.0) {
            a = cap1p;
        } else {
            const auto b = bisect(d1, 0.0, cap1p, 0.0, tol.max_bisection_iters);
            a = b.root();
            out.iterations += b.iterations;
        }
    }
    const double ta = t1_of(g1, g1p, nd, e21, a);
    out.rate = Rate(a);
    out.throughput = ta;

    // Branch 2: log2(1 + gamma1') < r <= log2(1 + gamma1), only the SIC-success
    // term survives. If its derivative is not positive right after the branch
    // point, the branch is dominated by the branch-1 endpoint (the objective
    // jumps down there).
    if (cap1p < cap1 && e21 < 1.0 && detail::u_condition_raw(g1, nd, cap1p) > 0.0) {
        double b2 = cap1;
        if (detail::u_condition_raw(g1, nd, cap1) < 0.0) {
            const auto b = bisect([&](double r) { return detail::u_condition_raw(g1, nd, r); },
                                  cap1p, cap1, 0.0, tol.max_bisection_iters);
            b2 = b.root();
            out.iterations += b.iterations;
        }
        const double tb = t1_of(g1, g1p, nd, e21, b2);
        if (tb > ta + tol.rate_tol) {
            out.rate = Rate(b2);
            out.throughput = tb;
            out.second_branch = true;
        }
    }
    return out;
}

Rate solve_r1(const ChannelGains& gains, double p1, double p2, Blocklength n, ErrorProb eps21,
              const Tolerances& tol) {
    return solve_r1_detailed(gains, p1, p2, n, eps21, tol).rate;
}

std::optional<P2LowerBound> p2_lower_bound_detailed(const ChannelGains& gains,
                                                    const SystemParams& params,
                                                    const Tolerances& tol) {
    const double t0 = params.t0;
    if (t0 == 0.0) return P2LowerBound{0.0, 0};
    const double p = params.p_total;
    const double nd = params.n.as_double();
    auto peak = [&](double p2) {
        return detail::stationary_rate(gamma2_of(gains, p - p2, p2), nd, tol).throughput;
    };
    double hi = p;
    double peak_hi = peak(hi);
    if (peak_hi < t0) return std::nullopt;

    double lo = 0.0;
    P2LowerBound res;
    while (res.iterations < tol.max_bisection_iters &&
           ((hi - lo) > tol.power_tol(p) || peak_hi - t0 > tol.throughput_tol)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ++res.iterations;
        const double pm = peak(mid);
        if (pm >= t0) {
            hi = mid;
            peak_hi = pm;
        } else {
            lo = mid;
        }
    }
    res.p2 = hi;
    return res;
}

std::optional<double> p2_lower_bound(const ChannelGains& gains, const SystemParams& params,
                                     const Tolerances& tol) {
    auto r = p2_lower_bound_detailed(gains, params, tol);
    if (!r) return std::nullopt;
    return r->p2;
}

bool convexity_gate(const ChannelGains& gains, const NomaDecision& d, Blocklength n) {
    const double g1 = snr_x1_sic(gains, d).value();
    const double g1p = sinr_x1_nosic(gains, d).value();
    const double g2 = sinr_x2_at_u2(gains, d).value();
    const double g21 = sinr_x2_at_u1(gains, d).value();
    const bool rate1_ok = capacity(g1p) < d.r1 && d.r1 <= capacity(g1);
    const double r2_bound =
        std::min(capacity(g2), capacity(g21) - 2.0 / (n.as_double() * gains.h1() * kLn2));
    return rate1_ok && d.r2 <= r2_bound;
}

namespace {

struct Candidate {
    double p2 = 0.0;
    double r2 = 0.0;
    double r1 = 0.0;
    double objective = 0.0;
    bool feasible = false;
    int fixed_point_iters = 0;
    bool fixed_point_fallback = false;
    int r1_iters = 0;
};

// Steps 1 and 2 at a given P2 with P1 = P - P2. When `fixed_r1` is set, R1 is
// not optimized.
Candidate evaluate_candidate(const ChannelGains& gains, const SystemParams& params, double p2,
                             const Tolerances& tol, std::optional<double> fixed_r1 = {}) {
    Candidate c;
    c.p2 = p2;
    const double p1 = std::max(0.0, params.p_total - p2);
    const double nd = params.n.as_double();

    double e21 = 0.0;
    if (params.t0 > 0.0) {
        if (!(p2 > 0.0)) return c;
        const auto fp = solve_r2_fixed_point(SnrValue(gamma2_of(gains, p1, p2)), params.n,
                                             params.t0, tol);
        if (!fp) return c;
        c.r2 = fp->rate.value();
        c.fixed_point_iters = fp->iterations;
        c.fixed_point_fallback = fp->used_fallback;
    }
    if (p2 > 0.0) e21 = detail::link_error(gamma21_of(gains, p1, p2), nd, c.r2);

    c.feasible = true;
    if (fixed_r1) {
        c.r1 = *fixed_r1;
        const double g1 = p1 * gains.h1();
        const double g1p = p1 * gains.h1() / (p2 * gains.h1() + 1.0);
        c.objective = t1_of(g1, g1p, nd, e21, c.r1);
    } else {
        const auto r1 = solve_r1_detailed(gains, p1, p2, params.n, ErrorProb(e21), tol);
        c.r1 = r1.rate.value();
        c.objective = r1.throughput;
        c.r1_iters = r1.iterations;
    }
    return c;
}

SolveReport make_report(const ChannelGains& gains, const SystemParams& params, const Candidate& c,
                        const Tolerances& tol) {
    SolveReport rep;
    if (!c.feasible) return rep;
    rep.feasible = true;
    rep.decision = NomaDecision{std::max(0.0, params.p_total - c.p2), c.p2, c.r1, c.r2};
    rep.evaluation = evaluate_noma(gains, rep.decision, params);
    rep.objective = rep.evaluation.t1_bar;
    rep.convexity_gate = convexity_gate(gains, rep.decision, params.n);
    if (rep.evaluation.gamma2 > 0.0) {
        rep.r2_stationary =
            detail::stationary_rate(rep.evaluation.gamma2, params.n.as_double(), tol).rate;
    }
    rep.iterations.fixed_point = c.fixed_point_iters;
    rep.iterations.fixed_point_fallback = c.fixed_point_fallback;
    rep.iterations.r1_bisection = c.r1_iters;
    return rep;
}

struct SearchOutcome {
    Candidate best;
    int golden_iterations = 0;
};

// Uniform scan of [lo, hi] followed by golden-section refinement around the
// best scan point. The refined point only replaces the scan winner if it is
// strictly better.
template <typename Eval>
SearchOutcome scan_and_refine(double lo, double hi, const NomaSearchOptions& opts,
                              const Tolerances& tol, double power_scale, Eval&& eval) {
    const int m = std::max(2, opts.scan_points);
    const auto scan = parallel_map<Candidate>(static_cast<std::size_t>(m), opts.exec,
                                              [&](std::size_t i) {
                                                  const double t = static_cast<double>(i) / (m - 1);
                                                  const double p2 = i + 1 == static_cast<std::size_t>(m)
                                                                        ? hi
                                                                        : lo + (hi - lo) * t;
                                                  return eval(p2);
                                              });
    const std::size_t ib = first_argmax(std::span<const Candidate>(scan),
                                        [](const Candidate& c) { return c.objective; });
    SearchOutcome out{scan[ib], 0};
    if (!(hi > lo)) return out;

    const double step = (hi - lo) / (m - 1);
    const double a = std::max(lo, scan[ib].p2 - step);
    const double b = std::min(hi, scan[ib].p2 + step);
    const auto g = golden_section_max([&](double p2) { return eval(p2).objective; }, a, b,
                                      tol.power_tol(power_scale), tol.max_bisection_iters);
    out.golden_iterations = g.iterations;
    if (g.value > out.best.objective) out.best = eval(g.x);
    return out;
}

}  // namespace

SolveReport optimize_noma(const ChannelGains& gains, const SystemParams& params,
                          const Tolerances& tol, const NomaSearchOptions& opts) {
    tol.validate();
    if (params.t0 == 0.0) {
        // Constraint vacuous: everything goes to user 1.
        return make_report(gains, params, evaluate_candidate(gains, params, 0.0, tol), tol);
    }
    const auto p2l = p2_lower_bound_detailed(gains, params, tol);
    if (!p2l) return SolveReport{};
    auto outcome = scan_and_refine(p2l->p2, params.p_total, opts, tol, params.p_total,
                                   [&](double p2) { return evaluate_candidate(gains, params, p2, tol); });
    SolveReport rep = make_report(gains, params, outcome.best, tol);
    rep.p2_lower = p2l->p2;
    rep.iterations.p2_lower_bisection = p2l->iterations;
    rep.iterations.golden = outcome.golden_iterations;
    rep.iterations.scan_points = std::max(2, opts.scan_points);
    return rep;
}

SolveReport noma_at_p2(const ChannelGains& gains, const SystemParams& params, double p2,
                       const Tolerances& tol) {
    if (!(p2 >= 0.0) || p2 > params.p_total) {
        throw std::invalid_argument("noma_at_p2: p2 must lie in [0, P]");
    }
    return make_report(gains, params, evaluate_candidate(gains, params, p2, tol), tol);
}

SolveReport noma_at_r2(const ChannelGains& gains, const SystemParams& params, double r2,
                       const Tolerances& tol) {
    if (!(r2 >= 0.0)) throw std::invalid_argument("noma_at_r2: r2 must be >= 0");
    const double p = params.p_total;
    const double nd = params.n.as_double();
    const double t0 = params.t0;

    double p2 = 0.0;
    if (t0 > 0.0) {
        auto t2 = [&](double x) {
            const double g2 = gamma2_of(gains, p - x, x);
            return g2 > 0.0 ? detail::throughput_raw(g2, nd, r2) : 0.0;
        };
        if (r2 <= t0 || t2(p) < t0) return SolveReport{};
        double lo = 0.0;
        double hi = p;
        double t_hi = t2(hi);
        for (int it = 0; it < tol.max_bisection_iters; ++it) {
            if ((hi - lo) <= tol.power_tol(p) && t_hi - t0 <= tol.throughput_tol) break;
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double tm = t2(mid);
            if (tm >= t0) {
                hi = mid;
                t_hi = tm;
            } else {
                lo = mid;
            }
        }
        p2 = hi;
    }
    const double p1 = p - p2;
    const double e21 = p2 > 0.0 ? detail::link_error(gamma21_of(gains, p1, p2), nd, r2) : 0.0;
    const auto r1 = solve_r1_detailed(gains, p1, p2, params.n, ErrorProb(e21), tol);

    Candidate c;
    c.p2 = p2;
    c.r2 = r2;
    c.r1 = r1.rate.value();
    c.objective = r1.throughput;
    c.feasible = true;
    c.r1_iters = r1.iterations;
    return make_report(gains, params, c, tol);
}

SolveReport noma_at_r1(const ChannelGains& gains, const SystemParams& params, double r1,
                       const Tolerances& tol, const NomaSearchOptions& opts) {
    if (!(r1 >= 0.0)) throw std::invalid_argument("noma_at_r1: r1 must be >= 0");
    if (params.t0 == 0.0) {
        return make_report(gains, params, evaluate_candidate(gains, params, 0.0, tol, r1), tol);
    }
    const auto p2l = p2_lower_bound_detailed(gains, params, tol);
    if (!p2l) return SolveReport{};
    auto outcome = scan_and_refine(
        p2l->p2, params.p_total, opts, tol, params.p_total,
        [&](double p2) { return evaluate_candidate(gains, params, p2, tol, r1); });
    SolveReport rep = make_report(gains, params, outcome.best, tol);
    rep.p2_lower = p2l->p2;
    return rep;
}

}  // namespace fblnoma
