#include "qpt/semiclassics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qpt::semiclassics {
namespace {

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric)
constexpr int kGL = 20;
constexpr double kGLNode[10] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr double kGLWeight[10] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

template <class F>
double gl_segment(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 10; ++i) {
        acc += kGLWeight[i] * (f(mid + half * kGLNode[i]) + f(mid - half * kGLNode[i]));
    }
    return acc * half;
}

// composite GL with segment doubling until 1e-9 relative agreement
template <class F>
double integrate(const F& f, double a, double b, int seg0, const char* what) {
    int nseg = seg0;
    double prev = 0.0;
    for (int pass = 0; pass < 12; ++pass) {
        double acc = 0.0;
        const double step = (b - a) / nseg;
        for (int s = 0; s < nseg; ++s) acc += gl_segment(f, a + s * step, a + (s + 1) * step);
        if (pass > 0 && std::abs(acc - prev) <= 1e-9 * std::max(1.0, std::abs(acc))) return acc;
        prev = acc;
        nseg *= 2;
    }
    throw convergence_error(std::string(what) + ": quadrature did not converge");
}

}  // namespace

ClassicalMode ClassicalMode::with_packet(double e, double q0, double p0, double sigma) {
    if (!(e > 0.0)) throw std::invalid_argument("ClassicalMode: frequency must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("ClassicalMode: sigma must be positive");
    return ClassicalMode{e, q0, p0, sigma, 1.0 / sigma};
}

ClassicalMode ClassicalMode::oscillator_ground_packet(double e) {
    if (!(e > 0.0)) throw std::invalid_argument("ClassicalMode: frequency must be positive");
    const double sigma = 1.0 / std::sqrt(e);
    return ClassicalMode{e, 0.0, 0.0, sigma, std::sqrt(2.0) / sigma};
}

PhasePoint trajectory_point(const ClassicalMode& mode, double q0, double p0, double t) {
    const double e = mode.frequency;
    const double c = std::cos(e * t), s = std::sin(e * t);
    return PhasePoint{q0 * c + (p0 / e) * s, p0 * c - e * q0 * s};
}

std::function<PhasePoint(double)> trajectory(const ClassicalMode& mode, double q0, double p0,
                                             double /*horizon*/) {
    return [mode, q0, p0](double t) { return trajectory_point(mode, q0, p0, t); };
}

double action_difference(const ClassicalMode& mode, const PerturbationFunction& v, double epsilon,
                         double q0, double p0, double t) {
    if (t < 0.0) throw std::invalid_argument("action_difference: t must be >= 0");
    if (t == 0.0 || epsilon == 0.0) return 0.0;
    const double period = 2.0 * M_PI / mode.frequency;
    const int seg0 = std::max(1, static_cast<int>(std::ceil(4.0 * t / period)));
    auto integrand = [&](double s) {
        const PhasePoint z = trajectory_point(mode, q0, p0, s);
        return v(z.q, z.p);
    };
    return epsilon * integrate(integrand, 0.0, t, seg0, "action_difference");
}

double period_averaged_perturbation(const ClassicalMode& mode, const PerturbationFunction& v,
                                    double p0) {
    const double period = 2.0 * M_PI / mode.frequency;
    auto integrand = [&](double s) {
        const PhasePoint z = trajectory_point(mode, mode.q0, p0, s);
        return v(z.q, z.p);
    };
    return integrate(integrand, 0.0, period, 4, "period_averaged_perturbation") / period;
}

SemiclassicalEstimates semiclassical_estimates(const ClassicalMode& mode,
                                               const PerturbationFunction& v, double epsilon) {
    const double h = std::max(1e-4 * mode.w, 1e-6);
    auto u = [&](double p0) { return period_averaged_perturbation(mode, v, p0); };

    auto d1 = [&](double step) { return (u(mode.p0 + step) - u(mode.p0 - step)) / (2.0 * step); };
    auto d2 = [&](double step) {
        return (u(mode.p0 + step) - 2.0 * u(mode.p0) + u(mode.p0 - step)) / (step * step);
    };

    // one Richardson step: R = (4 D(h/2) - D(h)) / 3
    const double d1h = d1(h), d1h2 = d1(0.5 * h);
    const double du = (4.0 * d1h2 - d1h) / 3.0;
    const double d2h = d2(h), d2h2 = d2(0.5 * h);
    const double d2u = (4.0 * d2h2 - d2h) / 3.0;

    const double scale1 = std::max({std::abs(d1h), std::abs(d1h2), 1e-12});
    const double scale2 = std::max({std::abs(d2h), std::abs(d2h2), 1e-12});
    if (std::abs(d1h - d1h2) > 1e-4 * scale1 + 1e-9)
        throw convergence_error("semiclassical_estimates: dU/dp0 did not converge");
    if (std::abs(d2h - d2h2) > 1e-4 * scale2 + 1e-9)
        throw convergence_error("semiclassical_estimates: d2U/dp0^2 did not converge");

    SemiclassicalEstimates est;
    est.du_dp0 = du;
    est.d2u_dp02 = d2u;
    const double g = epsilon * mode.w * du;
    est.gamma = 0.5 * g * g;
    est.xi = std::abs(0.5 * epsilon * mode.w * mode.w * d2u);
    est.c0 = 1.0;
    est.period = 2.0 * M_PI / mode.frequency;
    return est;
}

SurvivalSeries msc(const ClassicalMode& mode, const PerturbationFunction& v, double epsilon,
                   const std::vector<double>& times) {
    const double w = mode.w;
    const double lo = mode.p0 - 6.0 * w, hi = mode.p0 + 6.0 * w;
    const double norm = 1.0 / std::sqrt(M_PI * w * w);

    std::vector<double> log_m(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        auto sample = [&](double p0) {
            const double ds = action_difference(mode, v, epsilon, mode.q0, p0, t);
            const double gw = std::exp(-(p0 - mode.p0) * (p0 - mode.p0) / (w * w));
            return std::complex<double>(gw * std::cos(ds), gw * std::sin(ds));
        };
        auto value_with_nodes = [&](int nseg) {
            std::complex<double> acc(0.0, 0.0);
            const double step = (hi - lo) / nseg;
            for (int s = 0; s < nseg; ++s) {
                const double mid = lo + (s + 0.5) * step, half = 0.5 * step;
                for (int g = 0; g < 10; ++g)
                    acc += kGLWeight[g] * half *
                           (sample(mid + half * kGLNode[g]) + sample(mid - half * kGLNode[g]));
            }
            return std::norm(norm * acc);
        };
        int nseg = 8;
        double value = value_with_nodes(nseg);
        bool converged = false;
        for (int pass = 0; pass < 6; ++pass) {
            nseg *= 2;
            const double next = value_with_nodes(nseg);
            if (std::abs(next - value) < 1e-6) {
                value = next;
                converged = true;
                break;
            }
            value = next;
        }
        if (!converged)
            throw convergence_error("msc: p0 quadrature did not converge at t = " +
                                    std::to_string(t));
        log_m[i] = std::log(value);
    }

    SeriesMetadata meta;
    meta.model = "semiclassical-msc";
    meta.grid_descriptor = "points:" + std::to_string(times.size());
    meta.kernel_backend = "none";
    meta.extra["epsilon"] = std::to_string(epsilon);
    meta.extra["frequency"] = std::to_string(mode.frequency);
    return SurvivalSeries::from_log(times, std::move(log_m), std::move(meta));
}

double m1_model(double t, double c0, double gamma, double xi) {
    if (c0 <= 0.0 || gamma < 0.0 || xi < 0.0)
        throw std::invalid_argument("m1_model: c0 > 0 and gamma, xi >= 0 required");
    const double d = 1.0 + xi * xi * t * t;
    return c0 / std::sqrt(d) * std::exp(-gamma * t * t / d);
}

double m2_model(double t, double ks, double epsilon) {
    if (ks < 0.0) throw std::invalid_argument("m2_model: ks >= 0 required");
    return std::exp(-ks * epsilon * epsilon * t);
}

PerturbationFunction dicke_effective_perturbation(double gap_coefficient, double frequency) {
    const double a2 = gap_coefficient * gap_coefficient;
    const double inv_e2 = 1.0 / (frequency * frequency);
    return [a2, inv_e2](double q, double p) {
        return -0.25 * a2 * (5.0 * q * q - 3.0 * p * p * inv_e2);
    };
}

KsEstimate ks_estimator(const ClassicalMode& mode, const PerturbationFunction& v,
                        std::span<const PhasePoint> ensemble, double horizon) {
    if (ensemble.size() < 2) throw std::invalid_argument("ks_estimator: ensemble of size >= 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("ks_estimator: horizon must be positive");
    std::vector<double> integrals;
    integrals.reserve(ensemble.size());
    for (const PhasePoint& z : ensemble)
        integrals.push_back(action_difference(mode, v, 1.0, z.q, z.p, horizon));

    double mean = 0.0;
    for (double x : integrals) mean += x;
    mean /= static_cast<double>(integrals.size());
    double var = 0.0;
    for (double x : integrals) var += (x - mean) * (x - mean);
    var /= static_cast<double>(integrals.size() - 1);

    KsEstimate out;
    out.ks = var / horizon;
    out.stderr_ks = out.ks * std::sqrt(2.0 / static_cast<double>(integrals.size() - 1));
    return out;
}

KsEstimate ks_estimator_multi(std::span<const ClassicalMode> modes,
                              const MultiModePerturbation& v,
                              std::span<const std::vector<PhasePoint>> ensemble, double horizon) {
    if (ensemble.size() < 2)
        throw std::invalid_argument("ks_estimator_multi: ensemble of size >= 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("ks_estimator_multi: horizon positive");
    const std::size_t d = modes.size();

    // shortest period sets the quadrature resolution
    double e_max = 0.0;
    for (const auto& m : modes) e_max = std::max(e_max, m.frequency);
    const int seg0 = std::max(1, static_cast<int>(std::ceil(4.0 * horizon * e_max / (2.0 * M_PI))));

    std::vector<double> integrals;
    integrals.reserve(ensemble.size());
    std::vector<double> q(d), p(d);
    for (const auto& member : ensemble) {
        if (member.size() != d)
            throw std::invalid_argument("ks_estimator_multi: member dimension mismatch");
        auto integrand = [&](double s) {
            for (std::size_t j = 0; j < d; ++j) {
                const PhasePoint z = trajectory_point(modes[j], member[j].q, member[j].p, s);
                q[j] = z.q;
                p[j] = z.p;
            }
            return v(q, p);
        };
        integrals.push_back(integrate(integrand, 0.0, horizon, seg0, "ks_estimator_multi"));
    }

    double mean = 0.0;
    for (double x : integrals) mean += x;
    mean /= static_cast<double>(integrals.size());
    double var = 0.0;
    for (double x : integrals) var += (x - mean) * (x - mean);
    var /= static_cast<double>(integrals.size() - 1);

    KsEstimate out;
    out.ks = var / horizon;
    out.stderr_ks = out.ks * std::sqrt(2.0 / static_cast<double>(integrals.size() - 1));
    return out;
}

}  // namespace qpt::semiclassics
