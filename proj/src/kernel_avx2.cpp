// AVX2 + FMA backend.  Same lane algorithm as the scalar reference; the two
// must agree bit for bit (asserted by the kernel equivalence tests).

#include "qpt/kernel.hpp"

#if defined(QPT_BUILD_AVX2)

#include <immintrin.h>

#include <cstdint>

#include "qpt/detail/kernel_impl.hpp"

namespace qpt::kernel {
namespace {

struct lanes_avx2 {
    using f64 = __m256d;
    using i64 = __m256i;
    using mask = __m256d;  // all-ones / all-zeros lanes from _mm256_cmp_pd

    static f64 set1(double x) { return _mm256_set1_pd(x); }
    static i64 set1_i(std::int64_t x) { return _mm256_set1_epi64x(x); }
    static f64 load(const double* p) { return _mm256_loadu_pd(p); }

    static f64 add(f64 a, f64 b) { return _mm256_add_pd(a, b); }
    static f64 sub(f64 a, f64 b) { return _mm256_sub_pd(a, b); }
    static f64 mul(f64 a, f64 b) { return _mm256_mul_pd(a, b); }
    static f64 div(f64 a, f64 b) { return _mm256_div_pd(a, b); }
    static f64 neg(f64 a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
    static f64 fma(f64 a, f64 b, f64 c) { return _mm256_fmadd_pd(a, b, c); }
    static f64 round_nearest(f64 a) {
        return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    }
    static f64 floor(f64 a) { return _mm256_floor_pd(a); }
    static mask cmp_eq(f64 a, f64 b) { return _mm256_cmp_pd(a, b, _CMP_EQ_OQ); }
    static mask cmp_gt(f64 a, f64 b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
    static f64 select(mask m, f64 t, f64 f) { return _mm256_blendv_pd(f, t, m); }
    static i64 select_i(mask m, i64 t, i64 f) {
        return _mm256_blendv_epi8(f, t, _mm256_castpd_si256(m));
    }
    static i64 to_bits(f64 a) { return _mm256_castpd_si256(a); }
    static f64 from_bits(i64 a) { return _mm256_castsi256_pd(a); }
    static i64 shr52(i64 a) { return _mm256_srli_epi64(a, 52); }
    static i64 and_i(i64 a, i64 b) { return _mm256_and_si256(a, b); }
    static i64 or_i(i64 a, i64 b) { return _mm256_or_si256(a, b); }
    static i64 add_i(i64 a, i64 b) { return _mm256_add_epi64(a, b); }
    static i64 sub_i(i64 a, i64 b) { return _mm256_sub_epi64(a, b); }
    static f64 to_f64(i64 a) {
        // exponents fit in 32 bits; gather the low dword of each qword
        const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
        const __m128i lo = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(a, idx));
        return _mm256_cvtepi32_pd(lo);
    }
    static double reduce_pairwise(f64 a) {
        const __m128d lo = _mm256_castpd256_pd128(a);
        const __m128d hi = _mm256_extractf128_pd(a, 1);
        const __m128d pair = _mm_hadd_pd(lo, hi);  // {l0+l1, l2+l3}
        return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
    }
};

}  // namespace

double chunk_log_survival_avx2(const double* a, const double* e, std::size_t n, double t) {
    return detail::kernel<lanes_avx2>::chunk_log_survival(a, e, n, t);
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace qpt::kernel

#else  // !QPT_BUILD_AVX2

#include <stdexcept>

namespace qpt::kernel {

double chunk_log_survival_avx2(const double*, const double*, std::size_t, double) {
    throw std::runtime_error("avx2 kernel not built on this target");
}

bool avx2_available() { return false; }

}  // namespace qpt::kernel

#endif
