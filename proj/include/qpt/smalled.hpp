#pragma once

#include <vector>

#include "qpt/gaussian.hpp"
#include "qpt/quench.hpp"
#include "qpt/series.hpp"

namespace qpt::smalled {

// eigenenergies of H(lambda') and squared overlaps with the ground state of
// H(lambda); overlaps sum to 1
struct SpectralDecomposition {
    std::vector<double> energies;
    std::vector<double> overlaps;

    double overlap_sum() const;
};

// 2x2 fermion pair-subspace check of the mode factor: ground state of
// h_k(lambda) = 2[(lambda - cos ka) tau_z + sin(ka) tau_x] evolved under
// h_k(lambda'), survival probability returned exactly.
double pair_subspace_oracle(double ka, double lambda, double lambda_prime, double t);

// gamma-anisotropic variant, h_k = 2[(lambda - cos ka) tau_z + gamma sin(ka) tau_x];
// gamma = 1 is the Ising oracle
double xy_pair_subspace_oracle(double ka, double lambda, double lambda_prime, double gamma,
                               double t);

// truncated-Fock exact diagonalization of a quadratic-form quench (d <= 2).
// Attaches a convergence warning to the series when the ground state carries
// more than 1e-6 probability in the top Fock layer.
SurvivalSeries fock_truncation_sp(const gaussian::QuadraticBosonForm& h_pre,
                                  const gaussian::QuadraticBosonForm& h_post, int cutoff,
                                  const std::vector<double>& times);

// |<gs_a|gs_b>|^2 of two quadratic forms in the same truncated Fock space
double fock_ground_overlap(const gaussian::QuadraticBosonForm& a,
                           const gaussian::QuadraticBosonForm& b, int cutoff);

// occupation of the top Fock layer of the ground state of a form
double fock_ground_tail(const gaussian::QuadraticBosonForm& form, int cutoff);

// LMG collective-spin SP by banded (tridiagonal per parity block) exact
// diagonalization in the maximal-spin sector
SurvivalSeries lmg_survival_probability(const LMGParams& p, const QuenchSpec& q,
                                        const std::vector<double>& times);

// the spectral data behind lmg_survival_probability (same-parity block only)
SpectralDecomposition lmg_overlap_decomposition(const LMGParams& p, const QuenchSpec& q);

// merged spectrum of both parity blocks (unit test surface)
std::vector<double> lmg_block_spectrum(const LMGParams& p);
// spectrum of the unblocked dense matrix (unit test surface, small N only)
std::vector<double> lmg_dense_spectrum(const LMGParams& p);

// full 2^N transverse-field Ising chain, periodic, N <= 12 and odd
SurvivalSeries small_chain_ed_sp(int n_sites, double lambda, double lambda_prime,
                                 const std::vector<double>& times);

}  // namespace qpt::smalled
