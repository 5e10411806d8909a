#include "qpt/spectra.hpp"

#include <cmath>

namespace qpt::spectra {

double ising_mode_energy(double ka, double lambda) {
    return xy_mode_energy(ka, lambda, 1.0);
}

double ising_bogoliubov_angle(double ka, double lambda) {
    return xy_bogoliubov_angle(ka, lambda, 1.0);
}

double xy_mode_energy(double ka, double lambda, double gamma) {
    // (lambda - cos)^2 + gamma^2 sin^2 = (1-lambda)^2 + 4 lambda sin^2(ka/2) - (1-gamma^2) sin^2(ka)
    const double sh = std::sin(0.5 * ka);
    const double s = std::sin(ka);
    const double m = 1.0 - lambda;
    double arg = m * m + 4.0 * lambda * sh * sh - (1.0 - gamma * gamma) * (s * s);
    if (arg < 0.0) arg = 0.0;  // rounding at an exact gap closing
    return 2.0 * std::sqrt(arg);
}

double xy_bogoliubov_angle(double ka, double lambda, double gamma) {
    // cos(ka) - lambda written as (1-lambda) - 2 sin^2(ka/2)
    const double sh = std::sin(0.5 * ka);
    const double u = (1.0 - lambda) - 2.0 * sh * sh;
    double y = -gamma * std::sin(ka);
    if (y == 0.0) y = 0.0;  // pick the +pi branch at gamma = 0, per the (-pi, pi] contract
    return std::atan2(y, u);
}

double mode_ka(long long n_sites, long long m) {
    return 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n_sites);
}

long long mode_count(long long n_sites) {
    if (n_sites < 3 || n_sites % 2 == 0)
        throw std::invalid_argument("mode grid requires odd n_sites >= 3");
    return (n_sites - 1) / 2;
}

std::vector<double> mode_grid(long long n_sites) {
    const long long M = mode_count(n_sites);
    std::vector<double> out(static_cast<size_t>(M));
    for (long long m = 1; m <= M; ++m)
        out[static_cast<size_t>(m - 1)] = mode_ka(n_sites, m);
    return out;
}

ModeTable build_mode_table(const IsingParams& p) {
    XYParams xy{p.n_sites, p.lambda, 1.0};
    return build_mode_table(xy);
}

ModeTable build_mode_table(const XYParams& p) {
    p.validate();
    const long long M = mode_count(p.n_sites);
    ModeTable t;
    t.ka_values.resize(static_cast<size_t>(M));
    t.e_k.resize(static_cast<size_t>(M));
    t.theta.resize(static_cast<size_t>(M));
    for (long long m = 1; m <= M; ++m) {
        const double ka = mode_ka(p.n_sites, m);
        const size_t i = static_cast<size_t>(m - 1);
        t.ka_values[i] = ka;
        t.e_k[i] = xy_mode_energy(ka, p.lambda, p.gamma);
        t.theta[i] = xy_bogoliubov_angle(ka, p.lambda, p.gamma);
    }
    return t;
}

long long degenerate_mode_count(long long n_sites, double lambda, double energy_threshold) {
    if (!(energy_threshold > 0.0))
        throw std::invalid_argument("degenerate_mode_count: threshold must be positive");
    const long long M = mode_count(n_sites);
    long long count = 0;
    for (long long m = 1; m <= M; ++m) {
        if (ising_mode_energy(mode_ka(n_sites, m), lambda) < energy_threshold) ++count;
    }
    return count;
}

DickeSpectrum dicke_quasiparticle_energies(const DickeParams& p) {
    p.validate();
    const double lc = p.lambda_c();
    if (p.lambda > lc)
        throw phase_boundary_error("dicke_quasiparticle_energies: lambda > lambda_c (super-radiant phase)");
    return DickeSpectrum{
        dicke_soft_energy(p, p.lambda - lc),
        [&] {
            const double S = p.omega * p.omega + p.omega0 * p.omega0;
            const double D = p.omega0 * p.omega0 - p.omega * p.omega;
            const double R = std::sqrt(D * D + 16.0 * p.lambda * p.lambda * p.omega * p.omega0);
            return std::sqrt(0.5 * (S + R));
        }(),
        2.0 * std::pow(p.omega * p.omega0, 0.75) /
            std::sqrt(p.omega * p.omega + p.omega0 * p.omega0)};
}

double dicke_soft_energy(const DickeParams& p, double dlambda) {
    p.validate();
    if (dlambda > 0.0)
        throw phase_boundary_error("dicke_soft_energy: positive detuning (super-radiant phase)");
    const double lc = p.lambda_c();
    const double lam = lc + dlambda;
    const double S = p.omega * p.omega + p.omega0 * p.omega0;
    const double D = p.omega0 * p.omega0 - p.omega * p.omega;
    const double R = std::sqrt(D * D + 16.0 * lam * lam * p.omega * p.omega0);
    // e1^2 = (S - R)/2 = 8 omega omega0 (lc - lam)(lc + lam) / (S + R)
    double e1sq = 8.0 * p.omega * p.omega0 * (-dlambda) * (lc + lam) / (S + R);
    if (e1sq < 0.0) {
        if (e1sq < -64.0 * S * 2.2e-16)
            throw phase_boundary_error("dicke_soft_energy: e1^2 < 0 beyond rounding");
        e1sq = 0.0;
    }
    return std::sqrt(e1sq);
}

}  // namespace qpt::spectra
