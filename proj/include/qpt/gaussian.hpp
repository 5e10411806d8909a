#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qpt/quench.hpp"
#include "qpt/series.hpp"

namespace qpt::gaussian {

// Quadratic bosonic Hamiltonian H = (1/2) z^T H_m z in canonical coordinates
// z = (x1, p1, ..., x_d, p_d); additive constants are dropped throughout
// (survival probabilities are insensitive to global phase).
struct QuadraticBosonForm {
    Eigen::MatrixXd h;

    int modes() const { return static_cast<int>(h.rows()) / 2; }
    void validate() const;
};

// zero-mean pure Gaussian state; vacuum has sigma = I/2 (hbar = 1)
struct CovarianceState {
    Eigen::MatrixXd sigma;

    int modes() const { return static_cast<int>(sigma.rows()) / 2; }
    // det(2 sigma); equals 1 for pure states
    double purity_det() const;
};

// standard symplectic form, ordering (x1,p1,...): block-diag [[0,1],[-1,0]]
Eigen::MatrixXd symplectic_form(int modes);

struct WilliamsonForm {
    Eigen::MatrixXd S;            // symplectic: S^T H_m S = diag(e_j, e_j)
    Eigen::VectorXd frequencies;  // ascending normal-mode frequencies e_j
};

// symplectic normal form of a positive definite quadratic form
WilliamsonForm williamson(const QuadraticBosonForm& form);

// ground-state covariance sigma = S S^T / 2; throws phase_boundary_error if
// the form is not positive definite
CovarianceState ground_state_covariance(const QuadraticBosonForm& form);

// propagator S(t) = exp(Omega H_m t); exact normal-mode rotations when the
// form is positive definite, scaling-and-squaring otherwise
Eigen::MatrixXd symplectic_propagator(const QuadraticBosonForm& form, double t);

CovarianceState evolve(const CovarianceState& state, const QuadraticBosonForm& form, double t);

// |<psi_a|psi_b>|^2 = 1/sqrt(det(sigma_a + sigma_b)) for zero-mean pure states
double pure_overlap(const CovarianceState& a, const CovarianceState& b);

// closed-form SP of a mass-form frequency quench e -> e_prime (used as the
// independent cross-check of the Gaussian pipeline):
//   M(t) = [cos^2(e't) + ((e/e' + e'/e)/2)^2 sin^2(e't)]^(-1/2),
// with the e' -> 0 limit M(t) = [1 + (e t/2)^2]^(-1/2).
double oscillator_quench_sp(double e, double e_prime, double t);

// mass-form oscillator H = p^2/2 + e^2 x^2/2
QuadraticBosonForm oscillator_form(double e);

// Holstein-Primakoff two-mode normal-phase form
//   H = omega a^+a + omega0 b^+b + lambda (a^+ + a)(b^+ + b)
QuadraticBosonForm dicke_two_mode_form(const DickeParams& p);

// SP of the soft-mode frequency quench e1(lambda) -> e1(lambda') through the
// Gaussian pipeline; lambda' = lambda_c (e' = 0) is allowed
SurvivalSeries dicke_sp_effective(const DickeParams& p, const QuenchSpec& q,
                                  const std::vector<double>& times);

// SP of the full two-mode normal-phase quench
SurvivalSeries dicke_sp_two_mode(const DickeParams& p, const QuenchSpec& q,
                                 const std::vector<double>& times);

}  // namespace qpt::gaussian
