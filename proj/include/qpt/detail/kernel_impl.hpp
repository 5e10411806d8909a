#pragma once

// Mode-product kernel, written once against a 4-lane arithmetic interface and
// instantiated for a plain-double backend (reference) and an AVX2 backend.
// Both backends perform the identical sequence of IEEE operations, so their
// results are bit-identical; the unit tests assert exactly that.  The
// translation units including this header are compiled with -ffp-contract=off
// so the reference backend cannot silently fuse what the vector backend
// does not.
//
// Per mode the kernel accumulates log1p(-a * sin^2(e * t)) where a is the
// quench weight sin^2(theta - theta') and e the post-quench energy; summing
// in log space keeps 1e8-factor products from underflowing, and log1p keeps
// precision for the overwhelming majority of modes with F_k ~ 1.

#include <cstdint>
#include <cstring>

namespace qpt::detail {

// ---- sin^2 with pi/2 Cody-Waite reduction --------------------------------
// Classic Cephes minimax coefficients for sin/cos on |r| <= pi/4.
inline constexpr double kSinCoef[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8,
    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
    8.33333333332211858878e-3,  -1.66666666666666307295e-1};
inline constexpr double kCosCoef[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9,
    -2.75573141792967388112e-7,  2.48015872888517179954e-5,
    -1.38888888888730564116e-3,  4.16666666666665929218e-2};

inline constexpr double kTwoOverPi = 6.36619772367581382433e-01;
// pi/2 = PI2_A + PI2_B + PI2_C to ~160 bits
inline constexpr double kPi2A = 1.57079632679489655800e+00;
inline constexpr double kPi2B = 6.12323399573676603587e-17;
inline constexpr double kPi2C = -1.49738490485916537994e-33;

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// atanh-series coefficients 1/3, 1/5, ..., 1/23 (|z| <= 2-sqrt(2)-ish)
inline constexpr double kAtanhCoef[11] = {
    1.0 / 23.0, 1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0, 1.0 / 13.0,
    1.0 / 11.0, 1.0 / 9.0,  1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0};

// L is the lane backend: provides f64 (vector of 4 doubles), i64, and the
// static ops used below.  See kernel_scalar.cpp / kernel_avx2.cpp.
template <class L>
struct kernel {
    using F = typename L::f64;
    using I = typename L::i64;

    // sin^2(x) for x >= 0 (x = e_k * t, e_k >= 0, t >= 0)
    static inline F sinsq(F x) {
        const F k = L::round_nearest(L::mul(x, L::set1(kTwoOverPi)));
        F r = L::fma(k, L::set1(-kPi2A), x);
        r = L::fma(k, L::set1(-kPi2B), r);
        r = L::fma(k, L::set1(-kPi2C), r);
        const F z = L::mul(r, r);

        F ps = L::set1(kSinCoef[0]);
        for (int i = 1; i < 6; ++i) ps = L::fma(z, ps, L::set1(kSinCoef[i]));
        const F s = L::fma(L::mul(z, r), ps, r);
        const F s2 = L::mul(s, s);

        F pc = L::set1(kCosCoef[0]);
        for (int i = 1; i < 6; ++i) pc = L::fma(z, pc, L::set1(kCosCoef[i]));
        const F c = L::fma(L::mul(z, z), pc, L::fma(z, L::set1(-0.5), L::set1(1.0)));
        const F c2 = L::mul(c, c);

        // parity of k selects sin^2 vs cos^2 (signs are irrelevant squared);
        // k is integral and |k| << 2^52 so the halving arithmetic is exact
        const F parity = L::sub(k, L::mul(L::set1(2.0), L::floor(L::mul(k, L::set1(0.5)))));
        return L::select(L::cmp_eq(parity, L::set1(1.0)), c2, s2);
    }

    // log1p(y) for y in [-1, 0]; returns -inf at y == -1 exactly
    static inline F log1p_nonpos(F y) {
        const F one = L::set1(1.0);
        const F u = L::add(one, y);

        // decompose u = m * 2^e with m in [sqrt(1/2), sqrt(2))
        I bits = L::to_bits(u);
        I ebits = L::shr52(bits);                       // biased exponent
        I expo = L::sub_i(ebits, L::set1_i(1023));
        F m = L::from_bits(L::or_i(L::and_i(bits, L::set1_i(0x000FFFFFFFFFFFFFll)),
                                   L::set1_i(0x3FF0000000000000ll)));  // [1,2)
        const auto big = L::cmp_gt(m, L::set1(1.4142135623730951));
        m = L::select(big, L::mul(m, L::set1(0.5)), m);
        expo = L::add_i(expo, L::select_i(big, L::set1_i(1), L::set1_i(0)));
        const F kd = L::to_f64(expo);

        // z = (m-1)/(m+1), except when the exponent is zero, where z is formed
        // directly from y to dodge the 1+y rounding loss
        const auto exp_zero = L::cmp_eq(kd, L::set1(0.0));
        const F zm = L::div(L::sub(m, one), L::add(m, one));
        const F zy = L::div(y, L::add(L::set1(2.0), y));
        const F z = L::select(exp_zero, zy, zm);

        const F w = L::mul(z, z);
        F p = L::set1(kAtanhCoef[0]);
        for (int i = 1; i < 11; ++i) p = L::fma(w, p, L::set1(kAtanhCoef[i]));
        const F atanh2 = L::mul(L::add(z, z), L::fma(w, p, one));

        F res = L::fma(kd, L::set1(kLn2Hi), atanh2);
        res = L::fma(kd, L::set1(kLn2Lo), res);

        return L::select(L::cmp_eq(u, L::set1(0.0)), L::set1(-1.0 / 0.0), res);
    }

    // sum over n modes of log1p(-a[i] * sin^2(e[i] * t)).
    // A trailing group of n % 4 modes is padded with a = e = 0 entries, which
    // contribute exact zeros to their lanes.  Lane sums are reduced pairwise,
    // so the result does not depend on how callers split work across threads.
    static double chunk_log_survival(const double* a, const double* e, std::size_t n, double t) {
        const F tv = L::set1(t);
        F acc = L::set1(0.0);
        const std::size_t n4 = n & ~std::size_t(3);
        for (std::size_t i = 0; i < n4; i += 4) {
            const F ev = L::load(e + i);
            const F av = L::load(a + i);
            const F s2 = sinsq(L::mul(ev, tv));
            const F y = L::neg(L::mul(av, s2));
            acc = L::add(acc, log1p_nonpos(y));
        }
        if (n4 != n) {
            double pa[4] = {0.0, 0.0, 0.0, 0.0};
            double pe[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t i = n4; i < n; ++i) {
                pa[i - n4] = a[i];
                pe[i - n4] = e[i];
            }
            const F ev = L::load(pe);
            const F av = L::load(pa);
            const F s2 = sinsq(L::mul(ev, tv));
            const F y = L::neg(L::mul(av, s2));
            acc = L::add(acc, log1p_nonpos(y));
        }
        return L::reduce_pairwise(acc);
    }
};

}  // namespace qpt::detail
