#include "qpt/gaussian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

#include "qpt/spectra.hpp"

namespace qpt::gaussian {
namespace {

constexpr double kSymTol = 1e-12;

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m, Eigen::MatrixXd* inv_sqrt = nullptr) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_sqrt: eigensolver failed");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw phase_boundary_error("quadratic form is not positive definite");
    const Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
    const Eigen::MatrixXd r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    if (inv_sqrt)
        *inv_sqrt = es.eigenvectors() * root.cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose();
    return r;
}

bool positive_definite(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

void QuadraticBosonForm::validate() const {
    if (h.rows() != h.cols() || h.rows() % 2 != 0 || h.rows() == 0)
        throw std::invalid_argument("QuadraticBosonForm: h must be square with even dimension");
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > kSymTol * (1.0 + h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("QuadraticBosonForm: h must be symmetric");
}

double CovarianceState::purity_det() const { return (2.0 * sigma).determinant(); }

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd om = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int j = 0; j < modes; ++j) {
        om(2 * j, 2 * j + 1) = 1.0;
        om(2 * j + 1, 2 * j) = -1.0;
    }
    return om;
}

WilliamsonForm williamson(const QuadraticBosonForm& form) {
    form.validate();
    const int d = form.modes();
    Eigen::MatrixXd winv;
    sym_sqrt(form.h, &winv);  // throws phase_boundary_error if not PD
    const Eigen::MatrixXd om = symplectic_form(d);
    const Eigen::MatrixXd k = winv * om * winv;  // antisymmetric

    Eigen::RealSchur<Eigen::MatrixXd> schur(k);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("williamson: Schur decomposition failed");
    Eigen::MatrixXd q = schur.matrixU();
    Eigen::MatrixXd t = schur.matrixT();

    // normalize 2x2 blocks [[0, kappa], [-kappa, 0]] with kappa > 0, then sort
    // pairs by frequency e_j = 1/kappa_j ascending
    std::vector<std::pair<double, int>> pairs(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        if (t(2 * j, 2 * j + 1) < 0.0) {
            q.col(2 * j).swap(q.col(2 * j + 1));
            t(2 * j, 2 * j + 1) = -t(2 * j, 2 * j + 1);
        }
        pairs[static_cast<size_t>(j)] = {1.0 / t(2 * j, 2 * j + 1), j};
    }
    std::sort(pairs.begin(), pairs.end());

    Eigen::MatrixXd q_sorted(2 * d, 2 * d);
    Eigen::VectorXd freq(d);
    for (int j = 0; j < d; ++j) {
        const int src = pairs[static_cast<size_t>(j)].second;
        q_sorted.col(2 * j) = q.col(2 * src);
        q_sorted.col(2 * j + 1) = q.col(2 * src + 1);
        freq(j) = pairs[static_cast<size_t>(j)].first;
    }

    Eigen::VectorXd scale(2 * d);
    for (int j = 0; j < d; ++j) scale(2 * j) = scale(2 * j + 1) = std::sqrt(freq(j));
    WilliamsonForm wf;
    wf.S = winv * q_sorted * scale.asDiagonal();
    wf.frequencies = freq;
    return wf;
}

CovarianceState ground_state_covariance(const QuadraticBosonForm& form) {
    const WilliamsonForm wf = williamson(form);
    return CovarianceState{0.5 * wf.S * wf.S.transpose()};
}

Eigen::MatrixXd symplectic_propagator(const QuadraticBosonForm& form, double t) {
    form.validate();
    const int d = form.modes();
    if (positive_definite(form.h)) {
        // exact: rotate each normal mode by its frequency
        const WilliamsonForm wf = williamson(form);
        Eigen::MatrixXd rot = Eigen::MatrixXd::Zero(2 * d, 2 * d);
        for (int j = 0; j < d; ++j) {
            const double ph = wf.frequencies(j) * t;
            const double c = std::cos(ph), s = std::sin(ph);
            rot(2 * j, 2 * j) = c;
            rot(2 * j, 2 * j + 1) = s;
            rot(2 * j + 1, 2 * j) = -s;
            rot(2 * j + 1, 2 * j + 1) = c;
        }
        // S(t) = S_w R(t) S_w^{-1}; the inverse of a symplectic S is
        // -Omega S^T Omega
        const Eigen::MatrixXd om = symplectic_form(d);
        const Eigen::MatrixXd s_inv = -om * wf.S.transpose() * om;
        return wf.S * rot * s_inv;
    }
    const Eigen::MatrixXd gen = symplectic_form(d) * form.h * t;
    return gen.exp();
}

CovarianceState evolve(const CovarianceState& state, const QuadraticBosonForm& form, double t) {
    const Eigen::MatrixXd s = symplectic_propagator(form, t);
    return CovarianceState{s * state.sigma * s.transpose()};
}

double pure_overlap(const CovarianceState& a, const CovarianceState& b) {
    const double det = (a.sigma + b.sigma).determinant();
    if (!(det > 0.0))
        throw std::runtime_error("pure_overlap: determinant not positive (degenerate covariances)");
    return 1.0 / std::sqrt(det);
}

double oscillator_quench_sp(double e, double e_prime, double t) {
    if (e_prime == 0.0) {
        const double h = 0.5 * e * t;
        return 1.0 / std::sqrt(1.0 + h * h);
    }
    const double c = std::cos(e_prime * t), s = std::sin(e_prime * t);
    const double r = 0.5 * (e / e_prime + e_prime / e);
    return 1.0 / std::sqrt(c * c + r * r * s * s);
}

QuadraticBosonForm oscillator_form(double e) {
    Eigen::MatrixXd h(2, 2);
    h << e * e, 0.0, 0.0, 1.0;
    return QuadraticBosonForm{h};
}

QuadraticBosonForm dicke_two_mode_form(const DickeParams& p) {
    p.validate();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    h(0, 0) = h(1, 1) = p.omega;
    h(2, 2) = h(3, 3) = p.omega0;
    h(0, 2) = h(2, 0) = 2.0 * p.lambda;
    return QuadraticBosonForm{h};
}

namespace {

SeriesMetadata dicke_meta(const char* model, const DickeParams& p, const QuenchSpec& q,
                          std::size_t npts) {
    SeriesMetadata meta;
    meta.model = model;
    meta.quench = q;
    meta.grid_descriptor = "points:" + std::to_string(npts);
    meta.kernel_backend = "none";
    meta.extra["omega"] = std::to_string(p.omega);
    meta.extra["omega0"] = std::to_string(p.omega0);
    return meta;
}

void check_normal_phase(const DickeParams& p, const QuenchSpec& q, bool allow_critical_post) {
    if (q.delta_lambda >= 0.0)
        throw phase_boundary_error("dicke SP: pre-quench coupling not in the normal phase");
    if (q.delta > 0.0 || (!allow_critical_post && q.delta == 0.0))
        throw phase_boundary_error("dicke SP: post-quench coupling not in the normal phase");
}

}  // namespace

SurvivalSeries dicke_sp_effective(const DickeParams& p, const QuenchSpec& q,
                                  const std::vector<double>& times) {
    p.validate();
    check_normal_phase(p, q, /*allow_critical_post=*/true);
    const double e = spectra::dicke_soft_energy(p, q.delta_lambda);
    const double ep = spectra::dicke_soft_energy(p, q.delta);

    const QuadraticBosonForm h_pre = oscillator_form(e);
    const QuadraticBosonForm h_post = oscillator_form(ep);
    const CovarianceState s0 = ground_state_covariance(h_pre);

    std::vector<double> log_m(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const CovarianceState st = evolve(s0, h_post, times[i]);
        log_m[i] = std::log(pure_overlap(s0, st));
    }
    auto meta = dicke_meta("dicke-effective", p, q, times.size());
    meta.extra["e1_pre"] = std::to_string(e);
    meta.extra["e1_post"] = std::to_string(ep);
    return SurvivalSeries::from_log(times, std::move(log_m), std::move(meta));
}

SurvivalSeries dicke_sp_two_mode(const DickeParams& p, const QuenchSpec& q,
                                 const std::vector<double>& times) {
    p.validate();
    check_normal_phase(p, q, /*allow_critical_post=*/false);
    DickeParams pre = p;
    pre.lambda = q.lambda;
    DickeParams post = p;
    post.lambda = q.lambda_prime;

    const QuadraticBosonForm h_pre = dicke_two_mode_form(pre);
    const QuadraticBosonForm h_post = dicke_two_mode_form(post);
    const CovarianceState s0 = ground_state_covariance(h_pre);

    std::vector<double> log_m(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const CovarianceState st = evolve(s0, h_post, times[i]);
        log_m[i] = std::log(pure_overlap(s0, st));
    }
    return SurvivalSeries::from_log(times, std::move(log_m),
                                    dicke_meta("dicke-two-mode", p, q, times.size()));
}

}  // namespace qpt::gaussian
