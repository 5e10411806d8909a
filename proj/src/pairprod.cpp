#include "qpt/pairprod.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace qpt::pairprod {
namespace {

using kernel_fn = double (*)(const double*, const double*, std::size_t, double);

kernel_fn resolve_kernel(const RunOptions& opt) {
    const auto b = opt.backend.value_or(kernel::active_backend());
    return b == kernel::Backend::avx2 ? kernel::chunk_log_survival_avx2
                                      : kernel::chunk_log_survival_scalar;
}

// deterministic binary-tree reduction over chunk partials
double pairwise_sum(const double* v, std::size_t n) {
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

// Prep fills a[] (quench weights sin^2 d-theta) and e[] (post-quench
// energies) for modes m_lo..m_hi inclusive.
using prep_fn = std::function<void(long long, long long, double*, double*)>;

std::vector<double> run_product(long long n_modes, const std::vector<double>& times,
                                const RunOptions& opt, const prep_fn& prep) {
    for (double t : times)
        if (!std::isfinite(t)) throw std::invalid_argument("survival_probability: non-finite time");
    if (opt.chunk_size < 4) throw std::invalid_argument("chunk_size must be >= 4");

    const std::size_t nt = times.size();
    const std::size_t chunk = opt.chunk_size;
    const std::size_t nchunks =
        static_cast<std::size_t>((n_modes + static_cast<long long>(chunk) - 1) /
                                 static_cast<long long>(chunk));
    const int workers = resolve_workers(opt.workers);
    const kernel_fn kfn = resolve_kernel(opt);

    std::vector<double> partials(nchunks * nt);
    std::atomic<std::size_t> next{0};

    auto body = [&] {
        std::vector<double> a(chunk), e(chunk);
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) break;
            const long long m_lo = 1 + static_cast<long long>(c * chunk);
            const long long m_hi =
                std::min<long long>(n_modes, m_lo + static_cast<long long>(chunk) - 1);
            const std::size_t len = static_cast<std::size_t>(m_hi - m_lo + 1);
            prep(m_lo, m_hi, a.data(), e.data());
            for (std::size_t j = 0; j < nt; ++j)
                partials[c * nt + j] = kfn(a.data(), e.data(), len, times[j]);
        }
    };

    if (workers <= 1 || nchunks <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }

    std::vector<double> log_m(nt);
    std::vector<double> col(nchunks);
    for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t c = 0; c < nchunks; ++c) col[c] = partials[c * nt + j];
        log_m[j] = pairwise_sum(col.data(), nchunks);
    }
    return log_m;
}

SeriesMetadata make_meta(const std::string& model, const QuenchSpec& q, std::size_t npts,
                         const RunOptions& opt, long long n_sites, double gamma) {
    SeriesMetadata meta;
    meta.model = model;
    meta.quench = q;
    meta.grid_descriptor = "points:" + std::to_string(npts);
    meta.workers = resolve_workers(opt.workers);
    meta.kernel_backend =
        kernel::backend_name(opt.backend.value_or(kernel::active_backend()));
    meta.extra["n_sites"] = std::to_string(n_sites);
    meta.extra["chunk_size"] = std::to_string(opt.chunk_size);
    if (model == "xy") meta.extra["gamma"] = std::to_string(gamma);
    return meta;
}

void check_consistent(double params_lambda, const QuenchSpec& q) {
    if (params_lambda != q.lambda)
        throw std::invalid_argument("params.lambda and quench.lambda disagree");
}

SurvivalSeries xy_streamed(const XYParams& p, const QuenchSpec& q,
                           const std::vector<double>& times, const RunOptions& opt) {
    p.validate();
    check_consistent(p.lambda, q);
    const long long M = spectra::mode_count(p.n_sites);
    const double lam = q.lambda, lam_p = q.lambda_prime, gam = p.gamma;
    const long long N = p.n_sites;
    auto prep = [lam, lam_p, gam, N](long long m_lo, long long m_hi, double* a, double* e) {
        for (long long m = m_lo; m <= m_hi; ++m) {
            const double ka = spectra::mode_ka(N, m);
            const double dth = spectra::xy_bogoliubov_angle(ka, lam, gam) -
                               spectra::xy_bogoliubov_angle(ka, lam_p, gam);
            const double s = std::sin(dth);
            const std::size_t i = static_cast<std::size_t>(m - m_lo);
            a[i] = s * s;
            e[i] = spectra::xy_mode_energy(ka, lam_p, gam);
        }
    };
    auto log_m = run_product(M, times, opt, prep);
    const std::string model = gam == 1.0 ? "ising" : "xy";
    return SurvivalSeries::from_log(times, std::move(log_m),
                                    make_meta(model, q, times.size(), opt, N, gam));
}

SurvivalSeries xy_materialized(const XYParams& p, const QuenchSpec& q,
                               const std::vector<double>& times, const RunOptions& opt) {
    p.validate();
    check_consistent(p.lambda, q);
    const long long M = spectra::mode_count(p.n_sites);
    if (M > (1LL << 26))
        throw std::invalid_argument(
            "survival_probability: grid too large to materialize; use the streamed variant");
    XYParams post{p.n_sites, q.lambda_prime, p.gamma};
    const spectra::ModeTable pre_tab = spectra::build_mode_table(p);
    const spectra::ModeTable post_tab = spectra::build_mode_table(post);
    auto prep = [&pre_tab, &post_tab](long long m_lo, long long m_hi, double* a, double* e) {
        for (long long m = m_lo; m <= m_hi; ++m) {
            const std::size_t k = static_cast<std::size_t>(m - 1);
            const std::size_t i = static_cast<std::size_t>(m - m_lo);
            const double s = std::sin(pre_tab.theta[k] - post_tab.theta[k]);
            a[i] = s * s;
            e[i] = post_tab.e_k[k];
        }
    };
    auto log_m = run_product(M, times, opt, prep);
    const std::string model = p.gamma == 1.0 ? "ising" : "xy";
    return SurvivalSeries::from_log(times, std::move(log_m),
                                    make_meta(model, q, times.size(), opt, p.n_sites, p.gamma));
}

}  // namespace

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QPT_ECHO_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

double mode_factor(double theta_pre, double theta_post, double e_post, double t) {
    const double s = std::sin(theta_pre - theta_post);
    return 1.0 - (s * s) * kernel::sinsq(e_post * t);
}

SurvivalSeries survival_probability(const IsingParams& p, const QuenchSpec& q,
                                    const std::vector<double>& times, const RunOptions& opt) {
    return xy_materialized(XYParams{p.n_sites, p.lambda, 1.0}, q, times, opt);
}

SurvivalSeries survival_probability(const XYParams& p, const QuenchSpec& q,
                                    const std::vector<double>& times, const RunOptions& opt) {
    return xy_materialized(p, q, times, opt);
}

SurvivalSeries survival_probability_streamed(const IsingParams& p, const QuenchSpec& q,
                                             const std::vector<double>& times,
                                             const RunOptions& opt) {
    return xy_streamed(XYParams{p.n_sites, p.lambda, 1.0}, q, times, opt);
}

SurvivalSeries survival_probability_streamed(const XYParams& p, const QuenchSpec& q,
                                             const std::vector<double>& times,
                                             const RunOptions& opt) {
    return xy_streamed(p, q, times, opt);
}

}  // namespace qpt::pairprod
