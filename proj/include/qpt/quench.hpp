#pragma once

#include <cmath>
#include <stdexcept>

namespace qpt {

// One sudden quench lambda -> lambda' near a critical point lambda_c.
// epsilon and delta are the primary fields; delta_lambda is defined as
// delta - epsilon so that the identity delta - delta_lambda = epsilon is
// built in rather than re-derived from the absolute couplings (which would
// lose the small differences to cancellation when lambda ~ lambda_c).
struct QuenchSpec {
    double lambda = 0.0;        // pre-quench coupling
    double lambda_prime = 0.0;  // post-quench coupling
    double lambda_c = 0.0;      // critical coupling
    double epsilon = 0.0;       // lambda' - lambda
    double delta = 0.0;         // lambda' - lambda_c
    double delta_lambda = 0.0;  // lambda  - lambda_c
    double eta = 0.0;           // epsilon / delta_lambda (IEEE inf if delta_lambda == 0)

    static QuenchSpec from_lambdas(double lam, double lam_prime, double lam_c) {
        QuenchSpec q;
        q.lambda = lam;
        q.lambda_prime = lam_prime;
        q.lambda_c = lam_c;
        q.epsilon = lam_prime - lam;
        q.delta = lam_prime - lam_c;
        q.delta_lambda = q.delta - q.epsilon;
        q.eta = q.epsilon / q.delta_lambda;
        return q;
    }

    static QuenchSpec from_detuning(double lam_c, double eps, double del) {
        QuenchSpec q;
        q.lambda_c = lam_c;
        q.epsilon = eps;
        q.delta = del;
        q.delta_lambda = del - eps;
        q.lambda_prime = lam_c + del;
        q.lambda = q.lambda_prime - eps;
        q.eta = eps / q.delta_lambda;
        return q;
    }

    bool has_finite_eta() const { return std::isfinite(eta); }
};

struct IsingParams {
    long long n_sites = 3;  // odd, N = 2M+1
    double lambda = 0.0;

    void validate() const {
        if (n_sites < 3 || n_sites % 2 == 0)
            throw std::invalid_argument("IsingParams: n_sites must be odd and >= 3");
    }
};

struct XYParams {
    long long n_sites = 3;
    double lambda = 0.0;
    double gamma = 1.0;

    void validate() const {
        if (n_sites < 3 || n_sites % 2 == 0)
            throw std::invalid_argument("XYParams: n_sites must be odd and >= 3");
    }
};

struct DickeParams {
    double omega = 1.0;   // field frequency
    double omega0 = 1.0;  // atomic splitting
    double lambda = 0.0;  // coupling

    double lambda_c() const { return 0.5 * std::sqrt(omega * omega0); }

    void validate() const {
        if (!(omega > 0.0) || !(omega0 > 0.0))
            throw std::invalid_argument("DickeParams: omega and omega0 must be positive");
    }
};

struct LMGParams {
    long long n_spins = 2;
    double lambda = 0.0;
    double gamma = 0.0;  // anisotropy

    void validate() const {
        if (n_spins < 2)
            throw std::invalid_argument("LMGParams: n_spins must be >= 2");
    }
};

// Thrown when a parameter set crosses a phase boundary the model layer
// does not cover (e.g. Dicke super-radiant phase).
class phase_boundary_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Thrown when an iterative numerical procedure fails its own convergence
// diagnostic (quadrature node doubling, Richardson disagreement, ...).
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpt
