#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qpt/kernel.hpp"

namespace qpt::kernel {
namespace {

std::atomic<int> g_backend{-1};  // -1 = not yet detected

Backend detect_impl() {
    if (const char* env = std::getenv("QPT_ECHO_KERNEL")) {
        const std::string s(env);
        if (s == "scalar") return Backend::scalar;
        if (s == "avx2") {
            if (!avx2_available())
                throw std::runtime_error("QPT_ECHO_KERNEL=avx2 but host lacks AVX2+FMA");
            return Backend::avx2;
        }
        throw std::invalid_argument("QPT_ECHO_KERNEL must be 'scalar' or 'avx2'");
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend detect_backend() { return detect_impl(); }

Backend active_backend() {
    int b = g_backend.load(std::memory_order_relaxed);
    if (b < 0) {
        b = static_cast<int>(detect_impl());
        g_backend.store(b, std::memory_order_relaxed);
    }
    return static_cast<Backend>(b);
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw std::runtime_error("set_backend: host lacks AVX2+FMA");
    g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double chunk_log_survival(const double* a, const double* e, std::size_t n, double t) {
    return active_backend() == Backend::avx2 ? chunk_log_survival_avx2(a, e, n, t)
                                             : chunk_log_survival_scalar(a, e, n, t);
}

}  // namespace qpt::kernel
