#pragma once

// Brute-force reference optimizers for tests and the oracle-check command.
// They evaluate the throughput formulas directly from the fbl primitives on
// dense grids and never call the NOMA/OMA solvers. Feasibility is the
// inequality T2_bar >= T0, not the equality the solvers rely on.

#include <optional>

#include "fblnoma/noma_model.hpp"
#include "fblnoma/noma_opt.hpp"
#include "fblnoma/oma.hpp"
#include "fblnoma/parallel.hpp"

namespace fblnoma {

struct GridSpec {
    int p2_points = 200;
    int r2_points = 200;
    int r1_points = 200;

    void validate() const;
};

struct NomaGridResult {
    SolveReport report;
    // Largest change of T1_bar between the argmax and its grid neighbours;
    // bounds how far the grid optimum may sit below the continuous one.
    double resolution_slack = 0.0;
};

/// Grid over P2 in [0, P] (P1 = P - P2), R2 in [0, log2(1+gamma2)],
/// R1 in [0, log2(1+gamma1)]. Ties go to the lowest (P2, R2, R1) index.
NomaGridResult grid_optimize_noma(const ChannelGains& gains, const SystemParams& params,
                                  const GridSpec& grid, Execution exec = Execution::parallel);

struct OmaGridResult {
    OmaSolution solution;
    double resolution_slack = 0.0;
};

/// Grid over N2 (all splits, or only `fixed_n2`), P2 in [0, N P / N2] with
/// P1 = (N P - N2 P2) / N1, R2 in [0, log2(1+P2 h2)], R1 in [0, log2(1+P1 h1)].
OmaGridResult grid_optimize_oma(const ChannelGains& gains, const SystemParams& params,
                                const GridSpec& grid, std::optional<long> fixed_n2 = std::nullopt,
                                Execution exec = Execution::parallel);

}  // namespace fblnoma
