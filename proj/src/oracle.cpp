#include "fblnoma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fblnoma {

void GridSpec::validate() const {
    if (p2_points < 2 || r2_points < 2 || r1_points < 2) {
        throw std::invalid_argument("GridSpec: every axis needs at least 2 points");
    }
}

namespace {

// Error probability straight from the public primitives. Zero SNR: a positive
// rate always fails, rate zero never does.
double oracle_eps(double gamma, long n, double r) {
    if (gamma == 0.0) return r > 0.0 ? 1.0 : 0.0;
    return decode_error_prob(SnrValue(gamma), Blocklength(n), Rate(r)).value();
}

double grid_value(double hi, int points, int i) {
    return i + 1 == points ? hi : hi * static_cast<double>(i) / (points - 1);
}

struct NomaPoint {
    double p2 = 0.0;
    double r2 = 0.0;
    double r1 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    int i2 = 0;
    int i1 = 0;
    bool feasible = false;
};

// Everything the oracle needs at one (P2, R2, R1), feasible or not.
struct NomaFormula {
    double g21, g1, g1p, g2, e21, e1, e1p, e2, ebar1, t1, t2;
};

NomaFormula noma_formula(const ChannelGains& g, long n, double p_total, double p2, double r2,
                         double r1) {
    NomaFormula v{};
    const double p1 = std::max(0.0, p_total - p2);
    v.g21 = p2 * g.h1() / (p1 * g.h1() + 1.0);
    v.g1 = p1 * g.h1();
    v.g1p = p1 * g.h1() / (p2 * g.h1() + 1.0);
    v.g2 = p2 * g.h2() / (p1 * g.h2() + 1.0);
    v.e21 = p2 > 0.0 ? oracle_eps(v.g21, n, r2) : 0.0;
    v.e1 = oracle_eps(v.g1, n, r1);
    v.e1p = r1 > capacity(v.g1p) ? 1.0 : oracle_eps(v.g1p, n, r1);
    v.e2 = oracle_eps(v.g2, n, r2);
    v.ebar1 = v.e1 * (1.0 - v.e21) + v.e21 * v.e1p;
    v.t1 = r1 * (1.0 - v.ebar1);
    v.t2 = r2 * (1.0 - v.e2);
    return v;
}

}  // namespace

NomaGridResult grid_optimize_noma(const ChannelGains& gains, const SystemParams& params,
                                  const GridSpec& grid, Execution exec) {
    grid.validate();
    const long n = params.n.value();
    const double p_total = params.p_total;
    const double t0 = params.t0;

    // Best feasible point for each P2 row; rows are independent.
    const auto rows = parallel_map<NomaPoint>(
        static_cast<std::size_t>(grid.p2_points), exec, [&](std::size_t ip) {
            NomaPoint best;
            const double p2 = grid_value(p_total, grid.p2_points, static_cast<int>(ip));
            const double p1 = std::max(0.0, p_total - p2);
            const double g1 = p1 * gains.h1();
            const double g1p = p1 * gains.h1() / (p2 * gains.h1() + 1.0);
            const double g21 = p2 * gains.h1() / (p1 * gains.h1() + 1.0);
            const double g2 = p2 * gains.h2() / (p1 * gains.h2() + 1.0);
            const double cap1 = capacity(g1);
            const double cap2 = capacity(g2);

            // The user-1 conditional error probabilities depend on R1 only.
            std::vector<double> r1s(grid.r1_points), e1(grid.r1_points), e1p(grid.r1_points);
            for (int k = 0; k < grid.r1_points; ++k) {
                r1s[k] = grid_value(cap1, grid.r1_points, k);
                e1[k] = oracle_eps(g1, n, r1s[k]);
                e1p[k] = r1s[k] > capacity(g1p) ? 1.0 : oracle_eps(g1p, n, r1s[k]);
            }
            for (int j = 0; j < grid.r2_points; ++j) {
                const double r2 = grid_value(cap2, grid.r2_points, j);
                const double t2 = r2 * (1.0 - oracle_eps(g2, n, r2));
                if (!(t2 >= t0)) continue;
                const double e21 = p2 > 0.0 ? oracle_eps(g21, n, r2) : 0.0;
                for (int k = 0; k < grid.r1_points; ++k) {
                    const double t1 = r1s[k] * (1.0 - (e1[k] * (1.0 - e21) + e21 * e1p[k]));
                    if (!best.feasible || t1 > best.t1) {
                        best = NomaPoint{p2, r2, r1s[k], t1, t2, j, k, true};
                    }
                }
            }
            return best;
        });

    NomaGridResult out;
    int ib = -1;
    for (int i = 0; i < grid.p2_points; ++i) {
        if (rows[i].feasible && (ib < 0 || rows[i].t1 > rows[ib].t1)) ib = i;
    }
    if (ib < 0) return out;

    const NomaPoint& b = rows[ib];
    SolveReport& rep = out.report;
    rep.feasible = true;
    rep.decision = NomaDecision{std::max(0.0, p_total - b.p2), b.p2, b.r1, b.r2};
    const auto v = noma_formula(gains, n, p_total, b.p2, b.r2, b.r1);
    rep.evaluation = NomaEvaluation{v.g21, v.g1, v.g1p, v.g2, v.e21, v.e1, v.e1p, v.e2, v.ebar1,
                                    v.t1, v.t2};
    rep.objective = b.t1;

    // Neighbouring grid points along each axis, evaluated at the same indices.
    double slack = 0.0;
    for (int d = -1; d <= 1; d += 2) {
        const int ip = ib + d;
        if (ip >= 0 && ip < grid.p2_points) {
            const double p2n = grid_value(p_total, grid.p2_points, ip);
            const double p1n = std::max(0.0, p_total - p2n);
            const double cap2n = capacity(p2n * gains.h2() / (p1n * gains.h2() + 1.0));
            const double cap1n = capacity(p1n * gains.h1());
            const auto w = noma_formula(gains, n, p_total, p2n,
                                        grid_value(cap2n, grid.r2_points, b.i2),
                                        grid_value(cap1n, grid.r1_points, b.i1));
            slack = std::max(slack, std::abs(w.t1 - b.t1));
        }
        const double cap2 = capacity(v.g2);
        const double cap1 = capacity(v.g1);
        const int j = b.i2 + d;
        if (j >= 0 && j < grid.r2_points) {
            const auto w =
                noma_formula(gains, n, p_total, b.p2, grid_value(cap2, grid.r2_points, j), b.r1);
            slack = std::max(slack, std::abs(w.t1 - b.t1));
        }
        const int k = b.i1 + d;
        if (k >= 0 && k < grid.r1_points) {
            const auto w =
                noma_formula(gains, n, p_total, b.p2, b.r2, grid_value(cap1, grid.r1_points, k));
            slack = std::max(slack, std::abs(w.t1 - b.t1));
        }
    }
    out.resolution_slack = slack;
    return out;
}

namespace {

struct OmaPoint {
    OmaSolution sol;
    int ip = 0;
    int i1 = 0;
};

double oma_t(double h, double p, long ni, long n, double r) {
    if (r == 0.0) return 0.0;
    return static_cast<double>(ni) / static_cast<double>(n) * r * (1.0 - oracle_eps(p * h, ni, r));
}

}  // namespace

OmaGridResult grid_optimize_oma(const ChannelGains& gains, const SystemParams& params,
                                const GridSpec& grid, std::optional<long> fixed_n2,
                                Execution exec) {
    grid.validate();
    const long n = params.n.value();
    if (n < 2) throw std::invalid_argument("grid_optimize_oma: N must be >= 2");
    const double energy = static_cast<double>(n) * params.p_total;
    const double t0 = params.t0;

    const long first = fixed_n2 ? *fixed_n2 : 1;
    const long last = fixed_n2 ? *fixed_n2 : n - 1;
    if (first < 1 || last > n - 1) throw std::invalid_argument("grid_optimize_oma: bad N2");

    auto p2_at = [&](long n2, int ip) {
        return grid_value(energy / static_cast<double>(n2), grid.p2_points, ip);
    };
    auto p1_of = [&](long n2, double p2) {
        return std::max(0.0, (energy - static_cast<double>(n2) * p2) / static_cast<double>(n - n2));
    };

    // T1_bar depends on (N1, P1, R1) and feasibility on (N2, P2, R2), so for each
    // (N2, P2) the exhaustive max over the (R2, R1) product grid is the max over
    // R1 whenever any R2 is feasible.
    const auto per_split = parallel_map<OmaPoint>(
        static_cast<std::size_t>(last - first + 1), exec, [&](std::size_t idx) {
            const long n2 = first + static_cast<long>(idx);
            const long n1 = n - n2;
            OmaPoint best;
            for (int ip = 0; ip < grid.p2_points; ++ip) {
                const double p2 = p2_at(n2, ip);
                const double cap2 = capacity(p2 * gains.h2());
                double r2_ok = -1.0;
                double t2_ok = 0.0;
                for (int j = 0; j < grid.r2_points; ++j) {
                    const double r2 = grid_value(cap2, grid.r2_points, j);
                    const double t2 = oma_t(gains.h2(), p2, n2, n, r2);
                    if (t2 >= t0) {
                        r2_ok = r2;
                        t2_ok = t2;
                        break;
                    }
                }
                if (r2_ok < 0.0) continue;
                const double p1 = p1_of(n2, p2);
                const double cap1 = capacity(p1 * gains.h1());
                for (int k = 0; k < grid.r1_points; ++k) {
                    const double r1 = grid_value(cap1, grid.r1_points, k);
                    const double t1 = oma_t(gains.h1(), p1, n1, n, r1);
                    if (!best.sol.feasible || t1 > best.sol.t1_bar) {
                        best.sol.feasible = true;
                        best.sol.t1_bar = t1;
                        best.sol.t2_bar = t2_ok;
                        best.sol.decision = OmaDecision{n1, n2, p1, p2, r1, r2_ok};
                        best.ip = ip;
                        best.i1 = k;
                    }
                }
            }
            return best;
        });

    OmaGridResult out;
    int ib = -1;
    for (int i = 0; i < static_cast<int>(per_split.size()); ++i) {
        const auto& s = per_split[i].sol;
        if (s.feasible && (ib < 0 || s.t1_bar > per_split[ib].sol.t1_bar)) ib = i;
    }
    if (ib < 0) return out;
    const OmaPoint& b = per_split[ib];
    out.solution = b.sol;

    const OmaDecision& d = b.sol.decision;
    double slack = 0.0;
    for (int s = -1; s <= 1; s += 2) {
        const int ip = b.ip + s;
        if (ip >= 0 && ip < grid.p2_points) {
            const double p1n = p1_of(d.n2, p2_at(d.n2, ip));
            const double r1n = grid_value(capacity(p1n * gains.h1()), grid.r1_points, b.i1);
            slack = std::max(slack, std::abs(oma_t(gains.h1(), p1n, d.n1, n, r1n) - b.sol.t1_bar));
        }
        const int k = b.i1 + s;
        if (k >= 0 && k < grid.r1_points) {
            const double r1n = grid_value(capacity(d.p1 * gains.h1()), grid.r1_points, k);
            slack = std::max(slack, std::abs(oma_t(gains.h1(), d.p1, d.n1, n, r1n) - b.sol.t1_bar));
        }
    }
    out.resolution_slack = slack;
    return out;
}

}  // namespace fblnoma
