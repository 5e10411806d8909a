#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qpt/quench.hpp"
#include "qpt/series.hpp"

namespace qpt::semiclassics {

// One harmonic degree of freedom (mass form, H = p^2/2 + e^2 q^2/2) carrying
// an initial Gaussian packet.  sigma is the wavefunction width
// (psi ~ exp(-q^2/(2 sigma^2))); w is the width of the momentum weight in the
// propagator average.  w = 1/sigma is the narrow-packet limit.  For a packet
// that is an oscillator ground state, sigma = 1/sqrt(e) is not narrow, and
// the weight that reproduces the exact quench response of that packet is
// w = sqrt(2)/sigma; oscillator_ground_packet uses it (tests pin this against
// the exact Gaussian-engine SP).
struct ClassicalMode {
    double frequency = 1.0;
    double q0 = 0.0;
    double p0 = 0.0;
    double sigma = 1.0;
    double w = 1.0;

    static ClassicalMode with_packet(double e, double q0, double p0, double sigma);
    static ClassicalMode oscillator_ground_packet(double e);
};

// classical counterpart of the quench perturbation, V(q, p)
using PerturbationFunction = std::function<double(double, double)>;

struct PhasePoint {
    double q;
    double p;
};

// closed-form harmonic flow through (q0, p0)
PhasePoint trajectory_point(const ClassicalMode& mode, double q0, double p0, double t);

// callable q(t), p(t)
std::function<PhasePoint(double)> trajectory(const ClassicalMode& mode, double q0, double p0,
                                             double horizon);

// epsilon * integral_0^t V(q(t'), p(t')) dt' along the trajectory through
// (q0, p0); adaptive Gauss-Legendre on period segments, 1e-9 relative
double action_difference(const ClassicalMode& mode, const PerturbationFunction& v, double epsilon,
                         double q0, double p0, double t);

// time average of V over one period of the trajectory through (mode.q0, p0)
double period_averaged_perturbation(const ClassicalMode& mode, const PerturbationFunction& v,
                                    double p0);

struct SemiclassicalEstimates {
    double gamma = 0.0;       // (eps w dU/dp0)^2 / 2
    double xi = 0.0;          // |eps w^2 d2U/dp0^2 / 2|
    double c0 = 1.0;
    double period = 0.0;      // 2 pi / e
    double du_dp0 = 0.0;
    double d2u_dp02 = 0.0;
};

// central finite differences of the period-averaged perturbation at the
// packet center, Richardson-extrapolated once; throws convergence_error if
// the two extrapolation levels disagree beyond 1e-4 relative
SemiclassicalEstimates semiclassical_estimates(const ClassicalMode& mode,
                                               const PerturbationFunction& v, double epsilon);

// |m_sc(t)|^2 by quadrature of the propagator average over p0 in
// [p0 - 6w, p0 + 6w]; node count doubles until the change is < 1e-6
SurvivalSeries msc(const ClassicalMode& mode, const PerturbationFunction& v, double epsilon,
                   const std::vector<double>& times);

// model decay curves
double m1_model(double t, double c0, double gamma, double xi);
double m2_model(double t, double ks, double epsilon);

// classical counterpart of the Dicke soft-mode perturbation
//   V = -(A^2 / 2e) (c^+c + 2 c^+^2 + 2 c^2),  c = sqrt(e/2) q + i p / sqrt(2e)
// which maps to V(q, p) = -(A^2/4) (5 q^2 - 3 p^2 / e^2)
PerturbationFunction dicke_effective_perturbation(double gap_coefficient, double frequency);

struct KsEstimate {
    double ks = 0.0;
    double stderr_ks = 0.0;
};

// variance over the ensemble of int_0^t V dt', divided by t
KsEstimate ks_estimator(const ClassicalMode& mode, const PerturbationFunction& v,
                        std::span<const PhasePoint> ensemble, double horizon);

// multi-mode variant: independent harmonic modes, V over the joint phase
// space (the quasi-periodic large-d case of the exponential-decay estimate)
using MultiModePerturbation =
    std::function<double(std::span<const double>, std::span<const double>)>;

KsEstimate ks_estimator_multi(std::span<const ClassicalMode> modes,
                              const MultiModePerturbation& v,
                              std::span<const std::vector<PhasePoint>> ensemble, double horizon);

}  // namespace qpt::semiclassics
