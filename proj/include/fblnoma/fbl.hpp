#pragma once

// Finite-blocklength primitives: Gaussian tail, channel dispersion, the
// normal-approximation error probability and achievable rate.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fblnoma {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

/// Raised when a formula is evaluated at a point where it is undefined,
/// e.g. f_metric at zero SNR where the dispersion vanishes.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Linear SNR or SINR, dimensionless.
class SnrValue {
public:
    constexpr SnrValue() = default;
    explicit SnrValue(double gamma) : gamma_(gamma) {
        if (!std::isfinite(gamma) || gamma < 0.0) {
            throw std::domain_error("SnrValue: gamma must be finite and >= 0, got " +
                                    std::to_string(gamma));
        }
    }
    constexpr double value() const { return gamma_; }

private:
    double gamma_ = 0.0;
};

/// Number of channel uses. The normal approximation is accurate for n >= 100;
/// smaller values are accepted.
class Blocklength {
public:
    explicit Blocklength(long n) : n_(n) {
        if (n < 1) {
            throw std::domain_error("Blocklength: n must be >= 1, got " + std::to_string(n));
        }
    }
    constexpr long value() const { return n_; }
    constexpr double as_double() const { return static_cast<double>(n_); }

private:
    long n_;
};

/// Transmission rate in bits per channel use.
class Rate {
public:
    constexpr Rate() = default;
    explicit Rate(double r) : r_(r) {
        if (!std::isfinite(r) || r < 0.0) {
            throw std::domain_error("Rate: r must be finite and >= 0, got " + std::to_string(r));
        }
    }
    constexpr double value() const { return r_; }

private:
    double r_ = 0.0;
};

/// Probability in [0, 1]. Values above 0.5 are legal (a failed-SIC decode
/// above the interference-limited capacity has probability 1).
class ErrorProb {
public:
    constexpr ErrorProb() = default;
    explicit ErrorProb(double eps) : eps_(eps) {
        if (!(eps >= 0.0 && eps <= 1.0)) {
            throw std::domain_error("ErrorProb: eps must lie in [0, 1], got " + std::to_string(eps));
        }
    }
    constexpr double value() const { return eps_; }

private:
    double eps_ = 0.0;
};

/// Standard Gaussian upper tail, Q(x) = erfc(x / sqrt 2) / 2.
/// The far tail is floored at the smallest positive double so the result
/// stays strictly positive where the true value underflows (x > ~38.5).
double q_func(double x);

/// 1 - Q(x), computed as Q(-x) so that it keeps full precision when Q(x) is
/// close to 1.
inline double q_complement(double x) { return q_func(-x); }

/// Inverse of q_func on (0, 1).
double q_inv(double p);

/// Channel dispersion of the quasi-static Rayleigh channel, 1 - (1+gamma)^-2.
double dispersion(SnrValue gamma);

/// log2(1 + gamma) evaluated through log1p.
inline double capacity(double gamma) { return std::log1p(gamma) / kLn2; }

/// f(gamma, n, r) = ln2 * sqrt(n / V) * (log2(1+gamma) - r).
/// Throws SingularityError at gamma == 0.
double f_metric(SnrValue gamma, Blocklength n, Rate r);

/// eps = Q(f(gamma, n, r)).
ErrorProb decode_error_prob(SnrValue gamma, Blocklength n, Rate r);

struct AchievableRate {
    Rate rate;           // max(0, raw)
    double raw = 0.0;    // value of the normal approximation before clamping
    bool clamped = false;
};

/// Normal-approximation rate log2(1+gamma) - sqrt(V/n) Q^-1(eps) / ln2.
/// Negative values are clamped to 0 and flagged.
AchievableRate achievable_rate(SnrValue gamma, Blocklength n, ErrorProb eps);

namespace detail {

// Unchecked double-valued kernels used in the solvers' inner loops. Callers
// guarantee gamma > 0 and n >= 1.
inline double f_unchecked(double gamma, double n, double r) {
    const double onep = 1.0 + gamma;
    const double v = gamma * (2.0 + gamma) / (onep * onep);
    return std::sqrt(n / v) * (std::log1p(gamma) - r * kLn2);
}

// -d f / d r
inline double f_rate_slope(double gamma, double n) {
    const double onep = 1.0 + gamma;
    const double v = gamma * (2.0 + gamma) / (onep * onep);
    return std::sqrt(n / v) * kLn2;
}

inline double eps_unchecked(double gamma, double n, double r) {
    return q_func(f_unchecked(gamma, n, r));
}

}  // namespace detail

}  // namespace fblnoma
