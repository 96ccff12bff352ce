#include "fblnoma/fbl.hpp"

#include <array>
#include <limits>

namespace fblnoma {

namespace {

// Rational approximation of the standard normal quantile (Acklam), relative
// error about 1e-9 over (0, 1).
double normal_quantile_initial(double p) {
    constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                         -2.759285104469687e+02, 1.383577518672690e+02,
                                         -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                         -1.556989798598866e+02, 6.680131188771972e+01,
                                         -1.328068155288572e+01};
    constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                         -2.400758277161838e+00, -2.549732539343734e+00,
                                         4.374664141464968e+00,  2.938163982698783e+00};
    constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                         2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Q^-1 on (0, 0.5]; the answer is >= 0 there.
double q_inv_lower_half(double p) {
    double x = -normal_quantile_initial(p);
    for (int step = 0; step < 2; ++step) {
        const double density = kInvSqrt2Pi * std::exp(-0.5 * x * x);
        if (!(density > 0.0)) break;
        x += (q_func(x) - p) / density;
    }
    if (std::isfinite(x) && x >= 0.0 && std::abs(q_func(x) - p) <= 1e-12 * p) {
        return x;
    }
    // Bisection fallback on the decreasing map x -> Q(x).
    double lo = 0.0;
    double hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (q_func(mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double q_func(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("q_func: argument must be finite");
    }
    const double q = 0.5 * std::erfc(x * std::numbers::sqrt2 * 0.5);
    return q > 0.0 ? q : std::numeric_limits<double>::denorm_min();
}

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_inv: p must lie in (0, 1), got " + std::to_string(p));
    }
    if (p == 0.5) return 0.0;
    if (p < 0.5) return q_inv_lower_half(p);
    // 1 - p is exact for p in [0.5, 1).
    return -q_inv_lower_half(1.0 - p);
}

double dispersion(SnrValue gamma) {
    const double g = gamma.value();
    const double onep = 1.0 + g;
    return g * (2.0 + g) / (onep * onep);
}

double f_metric(SnrValue gamma, Blocklength n, Rate r) {
    if (gamma.value() == 0.0) {
        throw SingularityError("f_metric: dispersion vanishes at gamma = 0");
    }
    return detail::f_unchecked(gamma.value(), n.as_double(), r.value());
}

ErrorProb decode_error_prob(SnrValue gamma, Blocklength n, Rate r) {
    return ErrorProb(q_func(f_metric(gamma, n, r)));
}

AchievableRate achievable_rate(SnrValue gamma, Blocklength n, ErrorProb eps) {
    if (!(eps.value() > 0.0 && eps.value() < 1.0)) {
        throw std::domain_error("achievable_rate: eps must lie in (0, 1)");
    }
    if (gamma.value() == 0.0) {
        throw SingularityError("achievable_rate: gamma must be > 0");
    }
    const double v = dispersion(gamma);
    const double raw =
        capacity(gamma.value()) - std::sqrt(v / n.as_double()) * q_inv(eps.value()) / kLn2;
    AchievableRate out;
    out.raw = raw;
    out.clamped = raw < 0.0;
    out.rate = Rate(out.clamped ? 0.0 : raw);
    return out;
}

}  // namespace fblnoma
