#include "qpt/fitscale.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpt::fitscale {
namespace {

struct XY {
    std::vector<double> t;
    std::vector<double> y;  // ln M
};

XY select_window(const SurvivalSeries& s, const Window& w, std::size_t min_points,
                 const char* what) {
    XY out;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double t = s.times[i];
        if (t < w.t_min || t > w.t_max) continue;
        out.t.push_back(t);
        out.y.push_back(s.log_m_values[i]);
    }
    if (out.t.size() < min_points)
        throw std::invalid_argument(std::string(what) + ": fewer than " +
                                    std::to_string(min_points) + " points in window");
    return out;
}

struct LinFit {
    double slope, intercept, r_squared, slope_err, intercept_err, residual_max;
};

LinFit linear_least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear fit: degenerate abscissa");
    LinFit f{};
    f.slope = (dn * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double ss_res = 0, ss_tot = 0, mean = sy / dn;
    f.residual_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
        ss_tot += (y[i] - mean) * (y[i] - mean);
        f.residual_max = std::max(f.residual_max, std::abs(r));
    }
    f.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    const double sigma2 = n > 2 ? ss_res / (dn - 2.0) : 0.0;
    f.slope_err = std::sqrt(sigma2 * dn / det);
    f.intercept_err = std::sqrt(sigma2 * sxx / det);
    return f;
}

double m1_log(double t, double ln_c0, double gamma, double xi) {
    const double d = 1.0 + xi * xi * t * t;
    return ln_c0 - 0.5 * std::log(d) - gamma * t * t / d;
}

}  // namespace

double FitReport::param(const std::string& name) const {
    const auto it = parameters.find(name);
    if (it == parameters.end()) throw std::out_of_range("FitReport: no parameter " + name);
    return it->second;
}

FitReport fit_m1(const SurvivalSeries& series, const Window& window) {
    const XY d = select_window(series, window, 8, "fit_m1");
    for (double y : d.y)
        if (!(y <= 0.0) || !std::isfinite(y))
            throw std::invalid_argument("fit_m1: M values must lie in (0, 1]");
    const std::size_t n = d.t.size();

    // initialization: Gamma0 from a quadratic fit of ln M over the first 10%
    // of points, xi0 from the slope of the last decade in t
    double gamma0 = 0.0;
    {
        const std::size_t head = std::max<std::size_t>(3, n / 10);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < head; ++i) {
            num += -d.y[i] * d.t[i] * d.t[i];
            den += d.t[i] * d.t[i] * d.t[i] * d.t[i];
        }
        gamma0 = den > 0.0 ? std::max(0.0, num / den) : 0.0;
    }
    double xi0 = 0.0;
    {
        const double t_end = d.t.back();
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < n; ++i)
            if (d.t[i] >= 0.1 * t_end && d.t[i] > 0.0) {
                lx.push_back(std::log(d.t[i]));
                ly.push_back(d.y[i]);
            }
        // M ~ c0/(xi t) in the tail => xi ~ exp(-lnM)/t at the last point
        xi0 = std::exp(-d.y.back()) / t_end;
        (void)lx;
        (void)ly;
    }
    Eigen::Vector3d p(0.0, gamma0, xi0);  // (ln c0, gamma, xi)

    auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < n; ++i)
            r(static_cast<Eigen::Index>(i)) = d.y[i] - m1_log(d.t[i], q(0), q(1), q(2));
    };
    auto jacobian = [&](const Eigen::Vector3d& q, Eigen::MatrixXd& j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = d.t[i], xi = q(2), gamma = q(1);
            const double den = 1.0 + xi * xi * t * t;
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            // derivatives of the model; residual = y - model
            j(k, 0) = -1.0;
            j(k, 1) = t * t / den;
            j(k, 2) = xi * t * t / den - 2.0 * gamma * xi * t * t * t * t / (den * den);
        }
    };

    Eigen::VectorXd r(n);
    Eigen::MatrixXd j(n, 3);
    residuals(p, r);
    double cost = r.squaredNorm();
    double lm_lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < 500; ++iter) {
        jacobian(p, j);
        const Eigen::Matrix3d jtj = j.transpose() * j;
        const Eigen::Vector3d g = j.transpose() * r;
        Eigen::Matrix3d a = jtj;
        a.diagonal() += lm_lambda * jtj.diagonal().cwiseMax(1e-12);
        const Eigen::Vector3d step = a.ldlt().solve(-g);
        Eigen::Vector3d trial = p + step;
        trial(1) = std::max(0.0, trial(1));
        trial(2) = std::max(0.0, trial(2));
        Eigen::VectorXd rt(n);
        residuals(trial, rt);
        const double trial_cost = rt.squaredNorm();
        if (trial_cost <= cost) {
            const double rel_step = (trial - p).norm() / std::max(1e-30, p.norm());
            p = trial;
            r = rt;
            cost = trial_cost;
            lm_lambda = std::max(1e-12, lm_lambda * 0.1);
            if (rel_step < 1e-8) {
                converged = true;
                break;
            }
        } else {
            lm_lambda *= 10.0;
            if (lm_lambda > 1e12) break;
        }
    }

    FitReport rep;
    rep.form = FitReport::Form::m1;
    rep.window = window;
    rep.converged = converged;
    rep.iterations = iter;
    rep.parameters["c0"] = std::exp(p(0));
    rep.parameters["gamma"] = p(1);
    rep.parameters["xi"] = p(2);

    jacobian(p, j);
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const double sigma2 = n > 3 ? cost / static_cast<double>(n - 3) : 0.0;
    const Eigen::Matrix3d cov = sigma2 * jtj.inverse();
    rep.stderrs["c0"] = std::exp(p(0)) * std::sqrt(std::max(0.0, cov(0, 0)));
    rep.stderrs["gamma"] = std::sqrt(std::max(0.0, cov(1, 1)));
    rep.stderrs["xi"] = std::sqrt(std::max(0.0, cov(2, 2)));

    double ss_tot = 0.0, mean = 0.0;
    for (double y : d.y) mean += y;
    mean /= static_cast<double>(n);
    for (double y : d.y) ss_tot += (y - mean) * (y - mean);
    rep.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - cost / ss_tot;
    rep.residual_max = r.cwiseAbs().maxCoeff();
    return rep;
}

FitReport fit_exponential(const SurvivalSeries& series, const Window& window) {
    const XY d = select_window(series, window, 3, "fit_exponential");
    const LinFit f = linear_least_squares(d.t, d.y);
    FitReport rep;
    rep.form = FitReport::Form::exponential;
    rep.window = window;
    rep.parameters["rate"] = -f.slope;
    rep.parameters["intercept"] = f.intercept;
    rep.stderrs["rate"] = f.slope_err;
    rep.stderrs["intercept"] = f.intercept_err;
    rep.r_squared = f.r_squared;
    rep.residual_max = f.residual_max;
    return rep;
}

FitReport loglog_envelope_slope(const SurvivalSeries& series, const Window& window) {
    if (!(window.t_min > 0.0) || window.t_max < 10.0 * window.t_min)
        throw std::invalid_argument("loglog_envelope_slope: window must span >= 1 decade, t > 0");
    const double decades = std::log10(window.t_max / window.t_min);
    const int nbins = std::max(5, static_cast<int>(std::floor(8.0 * decades)));

    std::vector<double> env_t, env_y;
    const double lw = std::log(window.t_min), step = (std::log(window.t_max) - lw) / nbins;
    for (int b = 0; b < nbins; ++b) {
        const double lo = std::exp(lw + b * step), hi = std::exp(lw + (b + 1) * step);
        double best_m = -1.0, best_t = 0.0;
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            const double t = series.times[i];
            if (t < lo || t > hi) continue;
            if (series.m_values[i] > best_m) {
                best_m = series.m_values[i];
                best_t = t;
            }
        }
        if (best_m > 0.0) {
            env_t.push_back(std::log(best_t));
            env_y.push_back(std::log(best_m));
        }
    }
    if (env_t.size() < 5)
        throw std::invalid_argument("loglog_envelope_slope: fewer than 5 envelope points");

    const LinFit f = linear_least_squares(env_t, env_y);
    FitReport rep;
    rep.form = FitReport::Form::powerlaw_slope;
    rep.window = window;
    rep.parameters["slope"] = f.slope;
    rep.parameters["intercept"] = f.intercept;
    rep.stderrs["slope"] = f.slope_err;
    rep.stderrs["intercept"] = f.intercept_err;
    rep.r_squared = f.r_squared;
    rep.residual_max = f.residual_max;
    return rep;
}

GammaCollapseReport scaling_gamma(const std::vector<Batch>& batches,
                                  const std::vector<Window>& windows) {
    if (batches.empty()) throw std::invalid_argument("scaling_gamma: no batches");
    if (windows.size() != batches.size())
        throw std::invalid_argument("scaling_gamma: one window per batch required");

    GammaCollapseReport rep;
    for (std::size_t b = 0; b < batches.size(); ++b) {
        const XY d = select_window(batches[b].series, windows[b], 1, "scaling_gamma");
        const double eps = batches[b].quench.epsilon;
        double acc = 0.0;
        for (std::size_t i = 0; i < d.t.size(); ++i)
            acc += -d.y[i] / (eps * d.t[i] * d.t[i]);
        rep.points.push_back(
            GammaCollapsePoint{batches[b].quench.eta, eps, acc / static_cast<double>(d.t.size())});
    }

    // group points sharing eta (1e-6 relative) and measure the spread
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        for (std::size_t k = i + 1; k < rep.points.size(); ++k) {
            const double ei = rep.points[i].eta, ek = rep.points[k].eta;
            if (std::abs(ei - ek) > 1e-6 * std::max(std::abs(ei), std::abs(ek))) continue;
            const double vi = rep.points[i].value, vk = rep.points[k].value;
            const double ref = std::min(std::abs(vi), std::abs(vk));
            if (ref > 0.0) worst = std::max(worst, std::abs(vi - vk) / ref);
        }
    }
    rep.max_rel_deviation = worst;
    return rep;
}

XiOverlayReport scaling_xi(const std::vector<Batch>& batches, const Window& window) {
    if (batches.size() < 2) throw std::invalid_argument("scaling_xi: need >= 2 batches");
    const double delta0 = batches.front().quench.delta;
    for (const Batch& b : batches)
        if (b.quench.delta != delta0)
            throw std::invalid_argument("scaling_xi: batches must share a fixed delta");

    XiOverlayReport rep;
    double xlo = -1e300, xhi = 1e300;
    for (const Batch& b : batches) {
        const XY d = select_window(b.series, window, 2, "scaling_xi");
        std::vector<std::pair<double, double>> curve;
        const double root_eps = std::sqrt(std::abs(b.quench.epsilon));
        for (std::size_t i = 0; i < d.t.size(); ++i)
            curve.emplace_back(std::log(root_eps * d.t[i]), d.y[i]);
        xlo = std::max(xlo, curve.front().first);
        xhi = std::min(xhi, curve.back().first);
        rep.curves.push_back(std::move(curve));
    }
    if (!(xhi > xlo))
        throw std::invalid_argument("scaling_xi: curves do not overlap in ln(sqrt(eps) t)");

    // linear interpolation of each curve onto a shared abscissa grid
    const int ngrid = 64;
    double spread = 0.0;
    for (int g = 0; g < ngrid; ++g) {
        const double x = xlo + (xhi - xlo) * g / (ngrid - 1);
        double lo = 1e300, hi = -1e300;
        for (const auto& curve : rep.curves) {
            auto it = std::lower_bound(curve.begin(), curve.end(), x,
                                       [](const auto& p, double v) { return p.first < v; });
            if (it == curve.begin() || it == curve.end()) continue;
            const auto [x1, y1] = *(it - 1);
            const auto [x2, y2] = *it;
            const double y = y1 + (y2 - y1) * (x - x1) / (x2 - x1);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        if (hi > lo) spread = std::max(spread, hi - lo);
    }
    rep.vertical_spread = spread;
    return rep;
}

FitReport epsilon_exponent(const std::vector<Batch>& batches, double t_fix) {
    if (batches.size() < 3) throw std::invalid_argument("epsilon_exponent: need >= 3 batches");
    std::vector<double> x, y;
    for (const Batch& b : batches) {
        const auto& t = b.series.times;
        const auto& lnm = b.series.log_m_values;
        auto it = std::lower_bound(t.begin(), t.end(), t_fix);
        if (it == t.begin() || it == t.end())
            throw std::invalid_argument("epsilon_exponent: t_fix outside series grid");
        const std::size_t i = static_cast<std::size_t>(it - t.begin());
        const double w = (t_fix - t[i - 1]) / (t[i] - t[i - 1]);
        const double v = lnm[i - 1] + w * (lnm[i] - lnm[i - 1]);
        if (!(v < 0.0)) throw std::invalid_argument("epsilon_exponent: -ln M must be positive");
        x.push_back(std::log(std::abs(b.quench.epsilon)));
        y.push_back(std::log(-v));
    }
    const LinFit f = linear_least_squares(x, y);
    FitReport rep;
    rep.form = FitReport::Form::powerlaw_slope;
    rep.window = Window{t_fix, t_fix};
    rep.parameters["slope"] = f.slope;
    rep.parameters["intercept"] = f.intercept;
    rep.stderrs["slope"] = f.slope_err;
    rep.stderrs["intercept"] = f.intercept_err;
    rep.r_squared = f.r_squared;
    rep.residual_max = f.residual_max;
    return rep;
}

}  // namespace qpt::fitscale
