#include "fblnoma/noma_model.hpp"

#include <cmath>
#include <string>

namespace fblnoma {

ChannelGains::ChannelGains(double h1, double h2) : h1_(h1), h2_(h2) {
    if (!std::isfinite(h1) || !std::isfinite(h2) || !(h2 > 0.0) || !(h1 > h2)) {
        throw ConstraintError("ChannelGains: require h1 > h2 > 0, got h1=" +
                                    std::to_string(h1) + " h2=" + std::to_string(h2));
    }
}

SystemParams::SystemParams(Blocklength n_, double p_total_, double t0_)
    : n(n_), p_total(p_total_), t0(t0_) {
    if (!std::isfinite(p_total) || !(p_total > 0.0)) {
        throw std::invalid_argument("SystemParams: p_total must be > 0");
    }
    if (!std::isfinite(t0) || t0 < 0.0) {
        throw std::invalid_argument("SystemParams: t0 must be >= 0");
    }
}

SnrValue sinr_x2_at_u1(const ChannelGains& gains, const NomaDecision& d) {
    return SnrValue(d.p2 * gains.h1() / (d.p1 * gains.h1() + 1.0));
}

SnrValue snr_x1_sic(const ChannelGains& gains, const NomaDecision& d) {
    return SnrValue(d.p1 * gains.h1());
}

SnrValue sinr_x1_nosic(const ChannelGains& gains, const NomaDecision& d) {
    return SnrValue(d.p1 * gains.h1() / (d.p2 * gains.h1() + 1.0));
}

SnrValue sinr_x2_at_u2(const ChannelGains& gains, const NomaDecision& d) {
    return SnrValue(d.p2 * gains.h2() / (d.p1 * gains.h2() + 1.0));
}

namespace detail {

double link_error(double gamma, double n, double r) {
    if (gamma == 0.0) return r > 0.0 ? 1.0 : 0.0;
    return eps_unchecked(gamma, n, r);
}

double eps1_prime_raw(double gamma1_prime, double n, double r1) {
    if (r1 > capacity(gamma1_prime)) return 1.0;
    return link_error(gamma1_prime, n, r1);
}

}  // namespace detail

ErrorProb eps1_prime(const ChannelGains& gains, const NomaDecision& d, Blocklength n) {
    return ErrorProb(
        detail::eps1_prime_raw(sinr_x1_nosic(gains, d).value(), n.as_double(), d.r1));
}

NomaEvaluation evaluate_noma(const ChannelGains& gains, const NomaDecision& d,
                             const SystemParams& params) {
    if (!(d.p1 >= 0.0) || !(d.p2 >= 0.0) || !(d.r1 >= 0.0) || !(d.r2 >= 0.0)) {
        throw ConstraintError("evaluate_noma: powers and rates must be >= 0");
    }
    if (d.p1 + d.p2 > params.p_total * (1.0 + 1e-9)) {
        throw ConstraintError("evaluate_noma: p1 + p2 = " + std::to_string(d.p1 + d.p2) +
                              " exceeds the budget " + std::to_string(params.p_total));
    }
    const double n = params.n.as_double();

    NomaEvaluation e;
    e.gamma21 = sinr_x2_at_u1(gains, d).value();
    e.gamma1 = snr_x1_sic(gains, d).value();
    e.gamma1_prime = sinr_x1_nosic(gains, d).value();
    e.gamma2 = sinr_x2_at_u2(gains, d).value();

    e.eps21 = d.p2 == 0.0 ? 0.0 : detail::link_error(e.gamma21, n, d.r2);
    e.eps1 = detail::link_error(e.gamma1, n, d.r1);
    e.eps1_prime = detail::eps1_prime_raw(e.gamma1_prime, n, d.r1);
    e.eps2 = detail::link_error(e.gamma2, n, d.r2);

    e.eps_bar1 = e.eps1 - e.eps1 * e.eps21 + e.eps21 * e.eps1_prime;
    e.t1_bar = d.r1 * (1.0 - e.eps_bar1);
    e.t2_bar = d.r2 * (1.0 - e.eps2);
    return e;
}

}  // namespace fblnoma
