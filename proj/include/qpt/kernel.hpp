#pragma once

#include <cstddef>
#include <string>

namespace qpt::kernel {

enum class Backend { scalar, avx2 };

// backend the host supports best; QPT_ECHO_KERNEL=scalar|avx2 overrides
Backend detect_backend();
Backend active_backend();
void set_backend(Backend b);
std::string backend_name(Backend b);

// sum over modes of log1p(-a[i] * sin^2(e[i] * t)), dispatched to the active
// backend.  Arrays need no alignment; any length is accepted.
double chunk_log_survival(const double* a, const double* e, std::size_t n, double t);

// fixed-backend entry points (equivalence tests call both)
double chunk_log_survival_scalar(const double* a, const double* e, std::size_t n, double t);
double chunk_log_survival_avx2(const double* a, const double* e, std::size_t n, double t);
bool avx2_available();

// scalar elementwise pieces, same polynomial path as the lane kernels
double sinsq(double x);
double log1p_nonpos(double y);

}  // namespace qpt::kernel
