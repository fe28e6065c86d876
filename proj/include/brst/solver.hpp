#ifndef BRST_SOLVER_HPP
#define BRST_SOLVER_HPP

#include <memory>

#include "brst/primed.hpp"

namespace brst {

struct SolveOptions {
    /// delta-closed rank-1 free term of the lowest-order equation.
    std::optional<Sp2Tensor> freeTermY;
    /// delta-closed rank-1 free term of the higher-order equation.
    std::optional<Sp2Tensor> freeTermUpsilon;
    int cutoff = 3;          // max (c,pi)-degree kept in Pi and residuals
    int maxIterations = 40;
};

/// Result of a solve: Omega = Omega_1 + Pi with the recovered parameter
/// functions and the exact master-equation residual.
struct ChargeExpansion {
    Omega1Params params;
    Sp2Tensor omega1;   // rank 1
    Sp2Tensor pi;       // rank 1, (c,pi)-degree >= 2
    int cutoff = 3;
    Sp2Tensor residual; // rank 2: {Omega^a, Omega^b}, exact
    bool residualZeroToCutoff = false;
    bool residualZeroExact = false;
};

/// Diagnostics shared by solveLowest tests: number of Neumann terms used.
struct SolveStats {
    int neumannTermsB = 0;       // nonzero powers of (d+ B') applied
    int paramRounds = 0;         // outer fixed-point rounds
};

/// Solves the lowest-order master equation for the parameter functions.
Omega1Params solveLowest(Theory& th, const IndexSplit& split, const SolveOptions& opts,
                         SolveStats* stats = nullptr);

/// Solves the higher-order equation for Pi (rank 1) up to opts.cutoff.
Sp2Tensor solveHigher(Theory& th, const IndexSplit& split, const Omega1Params& params,
                      const SolveOptions& opts);

/// Omega = Omega_1 + Pi; computes the exact bracket residual and reports.
ChargeExpansion assembleAndVerify(Theory& th, const IndexSplit& split,
                                  const Omega1Params& params, const Sp2Tensor& pi, int cutoff);

} // namespace brst

#endif
