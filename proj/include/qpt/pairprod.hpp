#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpt/kernel.hpp"
#include "qpt/quench.hpp"
#include "qpt/series.hpp"
#include "qpt/spectra.hpp"

namespace qpt::pairprod {

// Execution knobs for the mode-product reduction.  The chunk size is part of
// the numerical contract: partial sums are formed per fixed chunk of mode
// indices and merged in a fixed pairwise order, so the result is bitwise
// independent of the worker count.
struct RunOptions {
    int workers = 0;                  // 0 = QPT_ECHO_WORKERS env or hardware default
    std::size_t chunk_size = 1 << 16;
    std::optional<kernel::Backend> backend;  // unset = active backend
};

int resolve_workers(int requested);

// single-mode survival factor F = 1 - sin^2(theta_pre - theta_post) sin^2(e_post t)
double mode_factor(double theta_pre, double theta_post, double e_post, double t);

// exact SP via a materialized ModeTable (memory O(N));  refuses grids past
// 2^26 modes -- use the streamed variant there.
SurvivalSeries survival_probability(const IsingParams& p, const QuenchSpec& q,
                                    const std::vector<double>& times,
                                    const RunOptions& opt = {});
SurvivalSeries survival_probability(const XYParams& p, const QuenchSpec& q,
                                    const std::vector<double>& times,
                                    const RunOptions& opt = {});

// identical numerical contract, O(chunk) memory: per-mode data is generated
// on the fly inside each chunk
SurvivalSeries survival_probability_streamed(const IsingParams& p, const QuenchSpec& q,
                                             const std::vector<double>& times,
                                             const RunOptions& opt = {});
SurvivalSeries survival_probability_streamed(const XYParams& p, const QuenchSpec& q,
                                             const std::vector<double>& times,
                                             const RunOptions& opt = {});

}  // namespace qpt::pairprod
