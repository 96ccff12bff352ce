#pragma once

// Two-user downlink NOMA with imperfect SIC: SINRs, conditional error
// probabilities, the effective error probability of the strong user and the
// effective throughputs of both users for one decision (P1, P2, R1, R2).
//
// Zero-power conventions (the formulas are singular there):
//   * p2 == 0: there is no x2 to cancel, eps21 = 0. If also r2 == 0 then
//     eps2 = 0 and t2_bar = 0.
//   * a link with zero SINR and a positive rate fails with probability 1.

#include <stdexcept>

#include "fblnoma/fbl.hpp"

namespace fblnoma {

class ConstraintError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Noise-normalized power gains with h1 > h2 > 0 (user 1 is the strong user).
class ChannelGains {
public:
    ChannelGains(double h1, double h2);
    double h1() const { return h1_; }
    double h2() const { return h2_; }

private:
    double h1_;
    double h2_;
};

struct NomaDecision {
    double p1 = 0.0;
    double p2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct SystemParams {
    Blocklength n{1};
    double p_total = 1.0;
    double t0 = 0.0;

    SystemParams() = default;
    SystemParams(Blocklength n_, double p_total_, double t0_);
};

struct NomaEvaluation {
    double gamma21 = 0.0;       // x2 at user 1, x1 as interference
    double gamma1 = 0.0;        // x1 at user 1 after SIC
    double gamma1_prime = 0.0;  // x1 at user 1 with x2 as interference
    double gamma2 = 0.0;        // x2 at user 2
    double eps21 = 0.0;         // SIC outage
    double eps1 = 0.0;
    double eps1_prime = 0.0;
    double eps2 = 0.0;
    double eps_bar1 = 0.0;
    double t1_bar = 0.0;
    double t2_bar = 0.0;
};

SnrValue sinr_x2_at_u1(const ChannelGains& gains, const NomaDecision& d);
SnrValue snr_x1_sic(const ChannelGains& gains, const NomaDecision& d);
SnrValue sinr_x1_nosic(const ChannelGains& gains, const NomaDecision& d);
SnrValue sinr_x2_at_u2(const ChannelGains& gains, const NomaDecision& d);

/// Error probability of x1 at user 1 conditioned on failed SIC: Q(f(gamma1', n, r1))
/// when r1 <= log2(1 + gamma1'), 1 otherwise.
ErrorProb eps1_prime(const ChannelGains& gains, const NomaDecision& d, Blocklength n);

/// Full evaluation of a decision. Throws ConstraintError when p1 + p2 exceeds
/// the budget by more than 1e-9 relative, or when a power or rate is negative.
NomaEvaluation evaluate_noma(const ChannelGains& gains, const NomaDecision& d,
                             const SystemParams& params);

namespace detail {

// Q(f(gamma, n, r)) with the zero-SNR convention: 1 for r > 0, 0 for r == 0.
double link_error(double gamma, double n, double r);

// Piecewise failed-SIC error probability on raw doubles.
double eps1_prime_raw(double gamma1_prime, double n, double r1);

}  // namespace detail

}  // namespace fblnoma
