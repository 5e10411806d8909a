#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qpt/quench.hpp"
#include "qpt/series.hpp"

namespace qpt::fitscale {

struct Window {
    double t_min;
    double t_max;
};

struct FitReport {
    enum class Form { m1, exponential, powerlaw_slope };
    Form form = Form::exponential;
    std::map<std::string, double> parameters;
    std::map<std::string, double> stderrs;
    double r_squared = 0.0;
    Window window{0.0, 0.0};
    double residual_max = 0.0;
    bool converged = true;
    int iterations = 0;

    double param(const std::string& name) const;
};

// weighted (uniform in log space) nonlinear least squares of ln M against
// ln m1_model; Levenberg-Marquardt with analytic Jacobian.  Non-convergence
// after 500 iterations returns the best-so-far report with converged=false.
FitReport fit_m1(const SurvivalSeries& series, const Window& window);

// linear least squares of ln M vs t; parameters: rate (= -slope), intercept
FitReport fit_exponential(const SurvivalSeries& series, const Window& window);

// envelope = per-bin maxima of M over >= 8 log-spaced bins per decade;
// fits the slope of ln M_env vs ln t
FitReport loglog_envelope_slope(const SurvivalSeries& series, const Window& window);

struct Batch {
    QuenchSpec quench;
    SurvivalSeries series;
};

struct GammaCollapsePoint {
    double eta = 0.0;
    double epsilon = 0.0;
    double value = 0.0;  // mean of (-ln M)/(eps t^2) over the short-time window
};

struct GammaCollapseReport {
    std::vector<GammaCollapsePoint> points;
    double max_rel_deviation = 0.0;  // across points sharing eta
};

// short-time collapse (-ln M)/(eps t^2) vs eta; windows select the
// Gamma t^2 regime per series
GammaCollapseReport scaling_gamma(const std::vector<Batch>& batches,
                                  const std::vector<Window>& windows);

struct XiOverlayReport {
    std::vector<std::vector<std::pair<double, double>>> curves;  // (ln(sqrt(eps) t), ln M)
    double vertical_spread = 0.0;  // max over the common abscissa range
};

// overlays ln M vs ln(sqrt(eps) t) in the 1/t window; all batches must share
// a fixed delta
XiOverlayReport scaling_xi(const std::vector<Batch>& batches, const Window& window);

// fixed-t scan: slope of ln(-ln M) vs ln|eps| (one point per batch,
// interpolated at t_fix)
FitReport epsilon_exponent(const std::vector<Batch>& batches, double t_fix);

}  // namespace qpt::fitscale
