#include "qpt/smalled.hpp"

#include <lapacke.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace qpt::smalled {
namespace {

// M(t) = |sum_a w_a exp(-i E_a t)|^2
std::vector<double> sp_curve(const SpectralDecomposition& sd, const std::vector<double>& times) {
    std::vector<double> log_m(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double re = 0.0, im = 0.0;
        for (std::size_t a = 0; a < sd.energies.size(); ++a) {
            const double ph = sd.energies[a] * times[i];
            re += sd.overlaps[a] * std::cos(ph);
            im -= sd.overlaps[a] * std::sin(ph);
        }
        log_m[i] = std::log(re * re + im * im);
    }
    return log_m;
}

void lapack_check(lapack_int info, const char* what) {
    if (info != 0)
        throw std::runtime_error(std::string(what) + ": LAPACK info = " + std::to_string(info));
}

// ---- LMG tridiagonal parity blocks ---------------------------------------

struct LmgBlock {
    std::vector<double> diag;
    std::vector<double> off;  // off[j] couples j and j+1 within the block
};

// block s (=0,1) collects basis states |S, m> with (m + S) = s (mod 2);
// S_x^2 and S_y^2 couple m to m and m +/- 2, so each block is tridiagonal.
LmgBlock lmg_block(const LMGParams& p, int s) {
    const long long n = p.n_spins;
    const double S = 0.5 * static_cast<double>(n);
    const double ss1 = S * (S + 1.0);
    auto cp = [&](double m) { return std::sqrt(ss1 - m * (m + 1.0)); };

    LmgBlock b;
    for (long long i = s; i <= n; i += 2) {
        const double m = static_cast<double>(i) - S;
        b.diag.push_back(-(1.0 / n) * 0.5 * (1.0 + p.gamma) * (ss1 - m * m) - p.lambda * m);
        if (i + 2 <= n)
            b.off.push_back(-(1.0 / n) * 0.25 * (1.0 - p.gamma) * cp(m) * cp(m + 1.0));
    }
    return b;
}

struct BlockGround {
    double energy;
    std::vector<double> vec;
};

BlockGround block_ground_state(const LmgBlock& blk) {
    const lapack_int n = static_cast<lapack_int>(blk.diag.size());
    std::vector<double> d = blk.diag, e = blk.off;
    std::vector<double> w(static_cast<size_t>(n)), z(static_cast<size_t>(n));
    std::vector<lapack_int> isuppz(2);
    lapack_int m_found = 0;
    lapack_check(LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                                1, 0.0, &m_found, w.data(), z.data(), n, isuppz.data()),
                 "lmg ground state (dstevr)");
    return BlockGround{w[0], std::move(z)};
}

struct BlockSpectrum {
    std::vector<double> energies;       // ascending
    std::vector<double> vectors;        // column-major n x n
};

BlockSpectrum block_full_spectrum(const LmgBlock& blk) {
    const lapack_int n = static_cast<lapack_int>(blk.diag.size());
    BlockSpectrum out;
    out.energies = blk.diag;
    std::vector<double> e = blk.off;
    out.vectors.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
    lapack_check(LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, out.energies.data(), e.data(),
                                out.vectors.data(), n),
                 "lmg spectrum (dstevd)");
    return out;
}

}  // namespace

double SpectralDecomposition::overlap_sum() const {
    return std::accumulate(overlaps.begin(), overlaps.end(), 0.0);
}

double pair_subspace_oracle(double ka, double lambda, double lambda_prime, double t) {
    return xy_pair_subspace_oracle(ka, lambda, lambda_prime, 1.0, t);
}

double xy_pair_subspace_oracle(double ka, double lambda, double lambda_prime, double gamma,
                               double t) {
    if (!(ka > 0.0) || !(ka < M_PI))
        throw std::invalid_argument("pair_subspace_oracle: ka must lie in (0, pi)");

    // h(mu) = [[a, b], [b, -a]], a = 2(mu - cos ka), b = 2 gamma sin ka
    const double c = std::cos(ka), s = std::sin(ka);
    const double a0 = 2.0 * (lambda - c), b0 = 2.0 * gamma * s;
    const double e0 = std::hypot(a0, b0);
    const double a1 = 2.0 * (lambda_prime - c), b1 = 2.0 * gamma * s;
    const double e1 = std::hypot(a1, b1);

    // ground state of h(lambda): eigenvalue -e0
    double gx, gy;
    if (e0 == 0.0) {
        gx = 1.0;
        gy = 0.0;
    } else if (a0 > 0.0) {
        gx = b0;
        gy = -(a0 + e0);
    } else {
        gx = a0 - e0;
        gy = b0;
    }
    const double norm = std::hypot(gx, gy);
    gx /= norm;
    gy /= norm;

    if (e1 == 0.0) return 1.0;  // post-quench pair Hamiltonian vanishes

    // exp(-i h' t) = cos(e1 t) I - i sin(e1 t) h'/e1 since h'^2 = e1^2 I;
    // survival = cos^2 + (<g|h'|g>/e1)^2 sin^2
    const double mean = a1 * (gx * gx - gy * gy) + 2.0 * b1 * gx * gy;
    const double cs = std::cos(e1 * t), sn = std::sin(e1 * t);
    const double r = mean / e1;
    return cs * cs + r * r * sn * sn;
}

// ---- truncated Fock space --------------------------------------------------

namespace {

using Cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;

// canonical operator list (x1, p1, x2, p2, ...) in the truncated number basis
std::vector<MatC> fock_canonical_ops(int d, int cutoff) {
    const int nb = cutoff + 1;
    MatC a = MatC::Zero(nb, nb);
    for (int n = 1; n < nb; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const MatC x1 = (a + a.adjoint()) / std::sqrt(2.0);
    const MatC p1 = Cplx(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0);

    std::vector<MatC> ops;
    if (d == 1) {
        ops = {x1, p1};
    } else {
        const MatC id = MatC::Identity(nb, nb);
        auto kron = [](const MatC& l, const MatC& r) {
            MatC out(l.rows() * r.rows(), l.cols() * r.cols());
            for (int i = 0; i < l.rows(); ++i)
                for (int j = 0; j < l.cols(); ++j)
                    out.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) = l(i, j) * r;
            return out;
        };
        ops = {kron(x1, id), kron(p1, id), kron(id, x1), kron(id, p1)};
    }
    return ops;
}

MatC fock_hamiltonian(const gaussian::QuadraticBosonForm& form, int cutoff) {
    form.validate();
    const int d = form.modes();
    if (d > 2) throw std::invalid_argument("fock truncation: d <= 2 only");
    if (cutoff < 16) throw std::invalid_argument("fock truncation: cutoff must be >= 16");
    const long long dim = static_cast<long long>(std::pow(cutoff + 1, d));
    if (dim > 8192) throw std::invalid_argument("fock truncation: basis too large");

    const auto z = fock_canonical_ops(d, cutoff);
    MatC h = MatC::Zero(z[0].rows(), z[0].cols());
    for (int j = 0; j < 2 * d; ++j)
        for (int k = 0; k < 2 * d; ++k) {
            const double c = form.h(j, k);
            if (c != 0.0) h += (0.25 * c) * (z[static_cast<size_t>(j)] * z[static_cast<size_t>(k)] +
                                             z[static_cast<size_t>(k)] * z[static_cast<size_t>(j)]);
        }
    return h;
}

Eigen::VectorXcd fock_gs(const MatC& h, Eigen::VectorXd* energies = nullptr,
                         MatC* vectors = nullptr) {
    Eigen::SelfAdjointEigenSolver<MatC> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fock truncation: eigensolver failed");
    if (energies) *energies = es.eigenvalues();
    if (vectors) *vectors = es.eigenvectors();
    return es.eigenvectors().col(0);
}

double top_layer_mass(const Eigen::VectorXcd& psi, int d, int cutoff) {
    const int nb = cutoff + 1;
    double tail = 0.0;
    if (d == 1) {
        tail = std::norm(psi(nb - 1));
    } else {
        for (int n1 = 0; n1 < nb; ++n1)
            for (int n2 = 0; n2 < nb; ++n2)
                if (n1 == cutoff || n2 == cutoff) tail += std::norm(psi(n1 * nb + n2));
    }
    return tail;
}

}  // namespace

SurvivalSeries fock_truncation_sp(const gaussian::QuadraticBosonForm& h_pre,
                                  const gaussian::QuadraticBosonForm& h_post, int cutoff,
                                  const std::vector<double>& times) {
    if (h_pre.modes() != h_post.modes())
        throw std::invalid_argument("fock truncation: mode count mismatch");
    const int d = h_pre.modes();

    const MatC hp = fock_hamiltonian(h_pre, cutoff);
    const Eigen::VectorXcd psi0 = fock_gs(hp);
    const double tail = top_layer_mass(psi0, d, cutoff);

    Eigen::VectorXd energies;
    MatC vectors;
    fock_gs(fock_hamiltonian(h_post, cutoff), &energies, &vectors);
    const Eigen::VectorXcd amps = vectors.adjoint() * psi0;

    SpectralDecomposition sd;
    sd.energies.assign(energies.data(), energies.data() + energies.size());
    sd.overlaps.resize(static_cast<size_t>(amps.size()));
    for (Eigen::Index i = 0; i < amps.size(); ++i)
        sd.overlaps[static_cast<size_t>(i)] = std::norm(amps(i));

    auto log_m = sp_curve(sd, times);
    SeriesMetadata meta;
    meta.model = "fock-truncation";
    meta.grid_descriptor = "points:" + std::to_string(times.size());
    meta.kernel_backend = "none";
    meta.extra["cutoff"] = std::to_string(cutoff);
    meta.extra["tail_mass"] = std::to_string(tail);
    if (tail > 1e-6)
        meta.warnings.push_back("fock truncation tail mass " + std::to_string(tail) +
                                " exceeds 1e-6; cutoff too small");
    return SurvivalSeries::from_log(times, std::move(log_m), std::move(meta));
}

double fock_ground_overlap(const gaussian::QuadraticBosonForm& a,
                           const gaussian::QuadraticBosonForm& b, int cutoff) {
    const Eigen::VectorXcd ga = fock_gs(fock_hamiltonian(a, cutoff));
    const Eigen::VectorXcd gb = fock_gs(fock_hamiltonian(b, cutoff));
    return std::norm(ga.dot(gb));
}

double fock_ground_tail(const gaussian::QuadraticBosonForm& form, int cutoff) {
    const Eigen::VectorXcd g = fock_gs(fock_hamiltonian(form, cutoff));
    return top_layer_mass(g, form.modes(), cutoff);
}

// ---- LMG -------------------------------------------------------------------

SpectralDecomposition lmg_overlap_decomposition(const LMGParams& p, const QuenchSpec& q) {
    p.validate();
    if (p.lambda != q.lambda)
        throw std::invalid_argument("lmg: params.lambda and quench.lambda disagree");
    if (p.n_spins > 20000)
        throw std::invalid_argument("lmg: n_spins beyond desk scale");

    // ground state of H(lambda): scan both parity blocks
    LMGParams pre = p;
    int gs_block = 0;
    BlockGround gs = block_ground_state(lmg_block(pre, 0));
    {
        BlockGround odd = block_ground_state(lmg_block(pre, 1));
        if (odd.energy < gs.energy) {
            gs = std::move(odd);
            gs_block = 1;
        }
    }

    LMGParams post = p;
    post.lambda = q.lambda_prime;
    const BlockSpectrum spec = block_full_spectrum(lmg_block(post, gs_block));

    const std::size_t n = spec.energies.size();
    SpectralDecomposition sd;
    sd.energies = spec.energies;
    sd.overlaps.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        double dot = 0.0;
        const double* col = spec.vectors.data() + a * n;
        for (std::size_t j = 0; j < n; ++j) dot += col[j] * gs.vec[j];
        sd.overlaps[a] = dot * dot;
    }
    return sd;
}

SurvivalSeries lmg_survival_probability(const LMGParams& p, const QuenchSpec& q,
                                        const std::vector<double>& times) {
    const SpectralDecomposition sd = lmg_overlap_decomposition(p, q);
    auto log_m = sp_curve(sd, times);
    SeriesMetadata meta;
    meta.model = "lmg";
    meta.quench = q;
    meta.grid_descriptor = "points:" + std::to_string(times.size());
    meta.kernel_backend = "none";
    meta.extra["n_spins"] = std::to_string(p.n_spins);
    meta.extra["gamma"] = std::to_string(p.gamma);
    return SurvivalSeries::from_log(times, std::move(log_m), std::move(meta));
}

std::vector<double> lmg_block_spectrum(const LMGParams& p) {
    p.validate();
    std::vector<double> all;
    for (int s = 0; s < 2; ++s) {
        LmgBlock blk = lmg_block(p, s);
        const lapack_int n = static_cast<lapack_int>(blk.diag.size());
        lapack_check(
            LAPACKE_dstevd(LAPACK_COL_MAJOR, 'N', n, blk.diag.data(), blk.off.data(), nullptr, n),
            "lmg block spectrum");
        all.insert(all.end(), blk.diag.begin(), blk.diag.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<double> lmg_dense_spectrum(const LMGParams& p) {
    p.validate();
    if (p.n_spins > 512) throw std::invalid_argument("lmg_dense_spectrum: small N only");
    const long long n = p.n_spins;
    const double S = 0.5 * static_cast<double>(n);
    const double ss1 = S * (S + 1.0);
    auto cp = [&](double m) { return std::sqrt(ss1 - m * (m + 1.0)); };

    const int dim = static_cast<int>(n) + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = static_cast<double>(i) - S;
        h(i, i) = -(1.0 / n) * 0.5 * (1.0 + p.gamma) * (ss1 - m * m) - p.lambda * m;
        if (i + 2 < dim) {
            const double v = -(1.0 / n) * 0.25 * (1.0 - p.gamma) * cp(m) * cp(m + 1.0);
            h(i, i + 2) = h(i + 2, i) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    return out;
}

// ---- small periodic TFI chain ----------------------------------------------

SurvivalSeries small_chain_ed_sp(int n_sites, double lambda, double lambda_prime,
                                 const std::vector<double>& times) {
    if (n_sites > 12) throw std::invalid_argument("small_chain_ed_sp: N <= 12");
    if (n_sites < 3 || n_sites % 2 == 0)
        throw std::invalid_argument("small_chain_ed_sp: N must be odd and >= 3");

    const int dim = 1 << n_sites;
    auto build = [&](double lam) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (int s = 0; s < dim; ++s) {
            double diag = 0.0;
            for (int i = 0; i < n_sites; ++i) {
                const int zi = (s >> i) & 1 ? 1 : -1;
                const int zj = (s >> ((i + 1) % n_sites)) & 1 ? 1 : -1;
                diag -= zi * zj;
            }
            h(s, s) = diag;
            for (int i = 0; i < n_sites; ++i) h(s ^ (1 << i), s) -= lam;
        }
        return h;
    };

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pre(build(lambda));
    if (pre.info() != Eigen::Success) throw std::runtime_error("chain ED: eigensolver failed");
    const Eigen::VectorXd psi0 = pre.eigenvectors().col(0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> post(build(lambda_prime));
    if (post.info() != Eigen::Success) throw std::runtime_error("chain ED: eigensolver failed");
    const Eigen::VectorXd amps = post.eigenvectors().transpose() * psi0;

    SpectralDecomposition sd;
    sd.energies.assign(post.eigenvalues().data(), post.eigenvalues().data() + dim);
    sd.overlaps.resize(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) sd.overlaps[static_cast<size_t>(i)] = amps(i) * amps(i);

    auto log_m = sp_curve(sd, times);
    SeriesMetadata meta;
    meta.model = "chain-ed";
    meta.quench = QuenchSpec::from_lambdas(lambda, lambda_prime, 1.0);
    meta.grid_descriptor = "points:" + std::to_string(times.size());
    meta.kernel_backend = "none";
    meta.extra["n_sites"] = std::to_string(n_sites);
    return SurvivalSeries::from_log(times, std::move(log_m), std::move(meta));
}

}  // namespace qpt::smalled
