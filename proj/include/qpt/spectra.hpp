#pragma once

#include <cstdint>
#include <vector>

#include "qpt/quench.hpp"

namespace qpt::spectra {

// dispersion e_k = 2 sqrt(1 + lambda^2 - 2 lambda cos(ka)), written as
// 2 sqrt((1-lambda)^2 + 4 lambda sin^2(ka/2)) which stays accurate when
// lambda ~ 1 and ka ~ 0 (the direct form cancels catastrophically there).
double ising_mode_energy(double ka, double lambda);

// two-argument arctangent branch: atan2(-sin ka, cos ka - lambda), in (-pi, pi].
double ising_bogoliubov_angle(double ka, double lambda);

// XY-chain candidates (gamma-anisotropic); gamma = 1 reproduces the Ising
// values bit for bit.  Validated against the pair-subspace oracle, which is
// the arbiter for the overall convention.
double xy_mode_energy(double ka, double lambda, double gamma);
double xy_bogoliubov_angle(double ka, double lambda, double gamma);

// ka of the m-th positive momentum mode, m = 1..(N-1)/2, N odd.
double mode_ka(long long n_sites, long long m);

// number of positive momentum modes
long long mode_count(long long n_sites);

// materialized grid 2 pi m / N, m = 1..M; strictly increasing, in (0, pi)
std::vector<double> mode_grid(long long n_sites);

// per-mode energies and Bogoliubov angles of a chain at one coupling
struct ModeTable {
    std::vector<double> ka_values;
    std::vector<double> e_k;
    std::vector<double> theta;
};

ModeTable build_mode_table(const IsingParams& p);
ModeTable build_mode_table(const XYParams& p);

// number of grid modes with e_k(lambda) < threshold; streaming, O(1) memory
long long degenerate_mode_count(long long n_sites, double lambda, double energy_threshold);

struct DickeSpectrum {
    double e1 = 0.0;               // soft quasiparticle energy
    double e2 = 0.0;               // gapped quasiparticle energy
    double gap_coefficient = 0.0;  // A in e1 ~ A |dlambda|^(1/2)
};

// normal-phase quasiparticle energies
//   e_{1,2}^2 = (omega^2 + omega0^2 -/+ sqrt((omega0^2-omega^2)^2 + 16 lambda^2 omega omega0)) / 2
// evaluated through the cancellation-free rewrite
//   e1^2 = 8 omega omega0 (lambda_c - lambda)(lambda_c + lambda) / (S + R).
DickeSpectrum dicke_quasiparticle_energies(const DickeParams& p);

// e1 as a function of the detuning dlambda = lambda - lambda_c, keeping full
// relative accuracy down to |dlambda| ~ 1e-16 (the quench paths need this at
// |delta| = 1e-10).  dlambda must be <= 0 (normal phase).
double dicke_soft_energy(const DickeParams& p, double dlambda);

}  // namespace qpt::spectra
