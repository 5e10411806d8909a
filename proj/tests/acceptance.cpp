// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  The full-scale chain run (1e8 modes) is enabled with
// QPT_ECHO_ACCEPT_FULL=1; the default configuration runs the documented
// CI-scale variant.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "qpt/fitscale.hpp"
#include "qpt/gaussian.hpp"
#include "qpt/io.hpp"
#include "qpt/pairprod.hpp"
#include "qpt/quench.hpp"
#include "qpt/semiclassics.hpp"
#include "qpt/smalled.hpp"
#include "qpt/spectra.hpp"

using namespace qpt;

namespace {

int g_failures = 0;

void line(const std::string& id, bool ok, const std::string& detail) {
    std::printf("%-4s %s  %s\n", id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, i / (n - 1.0));
    return v;
}

fitscale::Window band_window(const SurvivalSeries& s, double m_lo, double m_hi) {
    double t0 = 0.0, t1 = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (s.m_values[i] > m_hi || s.m_values[i] < m_lo) continue;
        if (!any) t0 = s.times[i];
        t1 = s.times[i];
        any = true;
    }
    return any ? fitscale::Window{t0, t1} : fitscale::Window{0.0, 0.0};
}

// ---- criterion 1 -----------------------------------------------------------
void criterion_1() {
    std::mt19937_64 rng(777001);
    std::uniform_real_distribution<double> uka(1e-9, M_PI - 1e-9);
    std::uniform_real_distribution<double> ulam(0.0, 2.0);
    std::uniform_real_distribution<double> ut(0.0, 1000.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double ka = uka(rng), lam = ulam(rng), lamp = ulam(rng), t = ut(rng);
        const double f = pairprod::mode_factor(spectra::ising_bogoliubov_angle(ka, lam),
                                               spectra::ising_bogoliubov_angle(ka, lamp),
                                               spectra::ising_mode_energy(ka, lamp), t);
        worst = std::max(worst, std::abs(f - smalled::pair_subspace_oracle(ka, lam, lamp, t)));
    }
    line("C01", worst <= 1e-12,
         "per-mode oracle equivalence over 1000 random tuples: max |dF| = " + fmt(worst) +
             " (tol 1e-12)");
}

// ---- criterion 2 -----------------------------------------------------------
SurvivalSeries chain_run(long long n, double eps, double del, int workers) {
    const auto q = QuenchSpec::from_detuning(1.0, eps, del);
    IsingParams p{n, q.lambda};
    TimeGrid grid{TimeGrid::Kind::linear, 0.0, 1000.0, 60};
    pairprod::RunOptions opt;
    opt.workers = workers;
    auto s = pairprod::survival_probability_streamed(p, q, grid.materialize(), opt);
    s.meta.grid_descriptor = grid.descriptor();
    return s;
}

void criterion_2() {
    {
        const auto s = chain_run(2000001, 8e-5, -4e-6, 0);
        const auto w = band_window(s, std::exp(-6.0), 0.9);
        const auto rep = fitscale::fit_exponential(s, w);
        line("C02", rep.r_squared >= 0.995,
             "chain decay line fit, CI scale (N=2e6+1, eps=8e-5, delta=-4e-6, M in [e^-6,0.9]): "
             "r^2 = " + fmt(rep.r_squared) + " (need >= 0.995), rate = " + fmt(rep.param("rate")));
    }
    if (std::getenv("QPT_ECHO_ACCEPT_FULL")) {
        const int workers = std::max(8, pairprod::resolve_workers(0));
        const auto s = chain_run(200000001, 8e-6, -4e-6, workers);
        const auto w = band_window(s, std::exp(-6.0), 0.9);
        const auto rep = fitscale::fit_exponential(s, w);
        line("C02f", rep.r_squared >= 0.999,
             "full scale (N=2e8+1, eps=8e-6, delta=-4e-6, " + std::to_string(workers) +
                 " workers): r^2 = " + fmt(rep.r_squared) + " (need >= 0.999), rate = " +
                 fmt(rep.param("rate")));
    } else {
        std::printf("C02f SKIP  full-scale variant (set QPT_ECHO_ACCEPT_FULL=1 to run)\n");
    }
}

// ---- criteria 3 and 4 ------------------------------------------------------
void criterion_3() {
    const long long n = 2000001;
    const double delta = -4e-6, t_fix = 30.0;
    TimeGrid grid{TimeGrid::Kind::linear, 0.0, 60.0, 31};
    const auto times = grid.materialize();
    std::vector<fitscale::Batch> batches;
    for (double eps : geomspace(2.5e-5, 2.5e-4, 9)) {
        const auto q = QuenchSpec::from_detuning(1.0, eps, delta);
        IsingParams p{n, q.lambda};
        batches.push_back({q, pairprod::survival_probability_streamed(p, q, times)});
    }
    const auto rep = fitscale::epsilon_exponent(batches, t_fix);
    const double slope = rep.param("slope");
    line("C03", std::abs(slope - 2.0) <= 0.05,
         "ln(-ln M) vs ln eps at fixed t=30, delta=-4e-6, one decade: slope = " + fmt(slope) +
             " (need 2.00 +- 0.05)");
}

void criterion_4() {
    const long long n = 2000001;
    const double eps = 8e-5, t_fix = 30.0;
    TimeGrid grid{TimeGrid::Kind::linear, 0.0, 60.0, 31};
    const auto times = grid.materialize();
    std::vector<double> ms;
    for (double del : {-4e-6, -1.6e-5, -6.4e-5, -2.56e-4, -1.024e-3}) {
        const auto q = QuenchSpec::from_detuning(1.0, eps, del);
        IsingParams p{n, q.lambda};
        const auto s = pairprod::survival_probability_streamed(p, q, times);
        for (std::size_t i = 0; i < s.times.size(); ++i)
            if (s.times[i] == t_fix) ms.push_back(s.m_values[i]);
    }
    bool ok = ms.size() == 5;
    std::string vals;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (i > 0 && ms[i] < ms[i - 1]) ok = false;
        vals += fmt(ms[i]) + (i + 1 < ms.size() ? ", " : "");
    }
    line("C04", ok,
         "M(t=30) nondecreasing in |delta| across 5-point grid at eps=8e-5: M = [" + vals + "]");
}

// ---- criteria 5, 6, 7 (Dicke) -----------------------------------------------
DickeParams dicke_unit() { return DickeParams{1.0, 1.0, 0.0}; }

void criterion_5() {
    DickeParams base = dicke_unit();
    const double eta = -0.9;
    std::vector<fitscale::Batch> batches;
    std::vector<fitscale::Window> windows;
    for (double eps : {1e-5, 5e-6, 2e-6, 1e-6}) {
        const double del = eps * (1.0 + eta) / eta;
        const auto q = QuenchSpec::from_detuning(base.lambda_c(), eps, del);
        DickeParams p = base;
        p.lambda = q.lambda;
        const double e = spectra::dicke_soft_energy(p, q.delta_lambda);
        const double ep = spectra::dicke_soft_energy(p, q.delta);
        const double xi_pred = (e * e - ep * ep) / (2.0 * e);
        const double t_probe = 0.2 / xi_pred;
        std::vector<double> times;
        for (int i = 1; i <= 8; ++i) times.push_back(t_probe * i / 8.0);
        batches.push_back({q, gaussian::dicke_sp_effective(p, q, times)});
        windows.push_back({times.front(), times.back()});
    }
    const auto rep = fitscale::scaling_gamma(batches, windows);
    line("C05", rep.max_rel_deviation <= 0.10,
         "(-ln M)/(eps t^2) collapse across 4 (eps,t) pairs sharing eta=-0.9: spread = " +
             fmt(rep.max_rel_deviation * 100.0) + "% (tol 10%)");
}

struct DickeFit {
    double xi_fit = 0.0, gamma_fit = 0.0, resid = 0.0;
    fitscale::FitReport rep;
};

DickeFit fit_dicke_series(double eps, double del, int points) {
    DickeParams p = dicke_unit();
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), eps, del);
    p.lambda = q.lambda;
    const double ep = spectra::dicke_soft_energy(p, q.delta);
    const auto times = geomspace(1.0, 0.4 / ep, points);
    const auto s = gaussian::dicke_sp_effective(p, q, times);
    DickeFit out;
    out.rep = fitscale::fit_m1(s, {times.front(), times.back()});
    out.xi_fit = out.rep.param("xi");
    out.gamma_fit = out.rep.param("gamma");
    out.resid = out.rep.residual_max;
    return out;
}

void criterion_6() {
    DickeParams base = dicke_unit();
    const double del = -1e-10;
    const auto eps_axis = geomspace(1.2e-6, 9e-6, 5);

    // overlay of ln M vs ln(sqrt(eps) t) inside the paper's 1/t window
    std::vector<fitscale::Batch> batches;
    for (double eps : eps_axis) {
        const auto q = QuenchSpec::from_detuning(base.lambda_c(), eps, del);
        DickeParams p = base;
        p.lambda = q.lambda;
        const auto times = geomspace(3000.0, 20000.0, 120);
        batches.push_back({q, gaussian::dicke_sp_effective(p, q, times)});
    }
    const auto overlay =
        fitscale::scaling_xi(batches, {std::exp(8.6), std::exp(9.5)});  // ln t in (8.6, 9.5)
    const bool ok_overlay = overlay.vertical_spread <= 0.1;

    // fitted xi vs eps log-log slope
    std::vector<double> lx, ly;
    for (double eps : eps_axis) {
        const auto f = fit_dicke_series(eps, del, 220);
        lx.push_back(std::log(eps));
        ly.push_back(std::log(f.xi_fit));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const bool ok_slope = std::abs(slope - 0.5) <= 0.05;

    line("C06", ok_overlay && ok_slope,
         "xi scaling at delta=-1e-10: overlay spread = " + fmt(overlay.vertical_spread) +
             " (tol 0.1), fitted xi slope vs eps = " + fmt(slope) + " (need 0.50 +- 0.05)");
}

void criterion_7() {
    const auto f = fit_dicke_series(1e-5, -1e-10, 300);
    const bool ok_resid = f.resid <= 0.05;

    DickeParams p = dicke_unit();
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 1e-5, -1e-10);
    p.lambda = q.lambda;
    const double ep = spectra::dicke_soft_energy(p, q.delta);
    const double t_a = 4.0 / f.xi_fit, t_b = 0.4 / ep;
    const auto times = geomspace(t_a, t_b, 500);
    const auto s = gaussian::dicke_sp_effective(p, q, times);
    const auto env = fitscale::loglog_envelope_slope(s, {t_a, t_b});
    const double slope = env.param("slope");
    const bool ok_slope = std::abs(slope + 1.0) <= 0.1;

    line("C07", ok_resid && ok_slope,
         "crossover shape at delta=-1e-10: fit_m1 residual_max = " + fmt(f.resid) +
             " (tol 0.05), long-time envelope slope = " + fmt(slope) + " (need -1 +- 0.1)");
}

// ---- criterion 8 ------------------------------------------------------------
void criterion_8() {
    std::mt19937_64 rng(777008);
    std::uniform_real_distribution<double> ue(0.5, 2.0);
    const std::vector<double> times{0.0, 0.7, 2.3, 9.1, 30.0};
    double worst_m = 0.0, worst_tail = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double e = ue(rng), ep = ue(rng);
        const auto pre = gaussian::oscillator_form(e);
        const auto post = gaussian::oscillator_form(ep);
        worst_tail = std::max(worst_tail, smalled::fock_ground_tail(pre, 256));
        const auto fock = smalled::fock_truncation_sp(pre, post, 256, times);
        const auto s0 = gaussian::ground_state_covariance(pre);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto st = gaussian::evolve(s0, post, times[k]);
            const double g = gaussian::pure_overlap(s0, st);
            worst_m = std::max(worst_m, std::abs(g - fock.m_values[k]));
        }
    }
    const bool ok_engine = worst_m <= 1e-8 && worst_tail < 1e-12;

    double worst_freq = 0.0;
    for (double w0 : {1.0, 1.3}) {
        DickeParams p{1.0, w0, 0.0};
        const double lc = p.lambda_c();
        for (int i = 0; i <= 40; ++i) {
            p.lambda = lc * 0.999 * i / 40.0;
            const auto wf = gaussian::williamson(gaussian::dicke_two_mode_form(p));
            const auto ref = spectra::dicke_quasiparticle_energies(p);
            worst_freq = std::max(worst_freq, std::abs(wf.frequencies(0) - ref.e1));
            worst_freq = std::max(worst_freq, std::abs(wf.frequencies(1) - ref.e2));
        }
    }
    const bool ok_freq = worst_freq <= 1e-12;

    line("C08", ok_engine && ok_freq,
         "engine equivalence: gaussian vs fock max |dM| = " + fmt(worst_m) +
             " (tol 1e-8, tail " + fmt(worst_tail) + "), Williamson vs closed form max |de| = " +
             fmt(worst_freq) + " (tol 1e-12)");
}

// ---- criterion 9 ------------------------------------------------------------
double lmg_envelope_slope(long long n, double lambda, double eps, double gamma) {
    const auto q = QuenchSpec::from_lambdas(lambda, lambda + eps, 1.0);
    LMGParams p{n, lambda, gamma};
    const auto times = geomspace(0.2, 2000.0, 2400);
    const auto s = smalled::lmg_survival_probability(p, q, times);
    const auto rep = fitscale::loglog_envelope_slope(s, {3.0, 30.0});
    return rep.param("slope");
}

void criterion_9() {
    // (a) at the pinned size N = 4096 the post-quench critical spectrum at
    // this N has too few participating levels for a power-law decade; the
    // criterion is evaluated as stated and its failure is analyzed in the
    // decisions ledger.  (b) the same quench at N = 16384 (still desk scale)
    // shows the predicted decay cleanly and is reported as supplementary
    // evidence.
    const double slope_4096 = lmg_envelope_slope(4096, 0.995, 0.005, 0.5);
    line("C09a", std::abs(slope_4096 + 1.0) <= 0.2,
         "lmg envelope slope, N=4096, gamma=0.5, lambda=0.995, eps=0.005, window [3,30]: " +
             fmt(slope_4096) + " (need -1 +- 0.2; expected shortfall, see decisions ledger)");

    const double slope_16384 = lmg_envelope_slope(16384, 0.995, 0.005, 0.5);
    line("C09b", std::abs(slope_16384 + 1.0) <= 0.2,
         "lmg envelope slope, supplementary N=16384, same quench and window: " +
             fmt(slope_16384) + " (need -1 +- 0.2)");

    const auto q = QuenchSpec::from_lambdas(0.995, 1.0, 1.0);
    LMGParams p{4096, 0.995, 1.0};
    const auto s = smalled::lmg_survival_probability(p, q, geomspace(0.2, 2000.0, 60));
    double worst = 0.0;
    for (double m : s.m_values) worst = std::max(worst, std::abs(m - 1.0));
    line("C09c", worst <= 1e-10,
         "lmg gamma=1 symmetry case: max |M - 1| = " + fmt(worst) + " (tol 1e-10)");
}

// ---- criterion 10 -----------------------------------------------------------
void criterion_10() {
    DickeParams p = dicke_unit();
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 1e-5, -1e-10);
    p.lambda = q.lambda;
    const double e = spectra::dicke_soft_energy(p, q.delta_lambda);
    const double ep = spectra::dicke_soft_energy(p, q.delta);
    const double a = spectra::dicke_quasiparticle_energies(p).gap_coefficient;

    const auto mode = semiclassics::ClassicalMode::oscillator_ground_packet(e);
    const auto v = semiclassics::dicke_effective_perturbation(a, e);
    const auto est = semiclassics::semiclassical_estimates(mode, v, q.epsilon);

    const auto f = fit_dicke_series(1e-5, -1e-10, 300);
    const double xi_rel = std::abs(est.xi - f.xi_fit) / f.xi_fit;
    // the exact quench curve carries its Gaussian stage in the prefactor, so
    // both Gamma estimates sit at zero on the curvature scale xi^2/2
    const double curvature = f.gamma_fit + 0.5 * f.xi_fit * f.xi_fit;
    const double gamma_rel = std::abs(est.gamma - f.gamma_fit) / curvature;
    const bool ok_pars = xi_rel <= 0.15 && gamma_rel <= 0.15;

    const double xi_exact = (e * e - ep * ep) / (2.0 * e);
    const auto times = geomspace(4.0 / xi_exact, 0.4 / ep, 6);
    const auto sc = semiclassics::msc(mode, v, q.epsilon, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double exact = gaussian::oscillator_quench_sp(e, ep, times[i]);
        worst = std::max(worst, std::abs(sc.m_values[i] - exact) / exact);
    }
    const bool ok_msc = worst <= 0.15;

    line("C10", ok_pars && ok_msc,
         "semiclassics consistency: xi_sc vs xi_fit rel = " + fmt(xi_rel * 100.0) +
             "% (tol 15%), Gamma deviation on the curvature scale = " + fmt(gamma_rel * 100.0) +
             "%, msc envelope vs exact max rel = " + fmt(worst * 100.0) + "% (tol 15%)");
}

// ---- criterion 11 -----------------------------------------------------------
void criterion_11() {
    const auto s1 = chain_run(2000001, 8e-5, -4e-6, 1);
    const auto s4 = chain_run(2000001, 8e-5, -4e-6, 4);
    const auto s16 = chain_run(2000001, 8e-5, -4e-6, 16);
    double worst = 0.0;
    for (std::size_t i = 0; i < s1.times.size(); ++i) {
        worst = std::max(worst, std::abs(s1.log_m_values[i] - s4.log_m_values[i]));
        worst = std::max(worst, std::abs(s1.log_m_values[i] - s16.log_m_values[i]));
    }
    // CSV bodies must agree byte for byte across worker counts (the worker
    // count itself is metadata, compared separately)
    auto body = [](const SurvivalSeries& s) {
        const std::string full = io::series_csv_string(s);
        return full.substr(full.find("t,M,lnM"));
    };
    const bool bytes_equal = body(s1) == body(s4) && body(s1) == body(s16);
    line("C11", worst <= 1e-12 && bytes_equal,
         "determinism across workers {1,4,16}: max |d lnM| = " + fmt(worst) +
             " (tol 1e-12), CSV data bytes identical = " + std::string(bytes_equal ? "yes" : "no"));
}

}  // namespace

int main() {
    std::printf("qpt-echo acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("failures: %d\n", g_failures);
    return g_failures;
}
