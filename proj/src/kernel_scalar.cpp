// Reference backend: four explicit double lanes mirroring the AVX2 layout.
// Compiled with -ffp-contract=off so no implicit fusion diverges from the
// vector code.  Every op here rounds exactly like its AVX2 counterpart.

#include <bit>
#include <cmath>
#include <cstdint>

#include "qpt/detail/kernel_impl.hpp"
#include "qpt/kernel.hpp"

namespace qpt::kernel {
namespace {

struct lanes4 {
    struct f64 {
        double v[4];
    };
    struct i64 {
        std::int64_t v[4];
    };
    struct mask {
        bool v[4];
    };

    static f64 set1(double x) { return {x, x, x, x}; }
    static i64 set1_i(std::int64_t x) { return {x, x, x, x}; }
    static f64 load(const double* p) { return {p[0], p[1], p[2], p[3]}; }

#define QPT_LANE_OP(name, expr)                              \
    static f64 name(f64 a, f64 b) {                          \
        f64 r;                                               \
        for (int i = 0; i < 4; ++i) r.v[i] = (expr);         \
        return r;                                            \
    }
    QPT_LANE_OP(add, a.v[i] + b.v[i])
    QPT_LANE_OP(sub, a.v[i] - b.v[i])
    QPT_LANE_OP(mul, a.v[i] * b.v[i])
    QPT_LANE_OP(div, a.v[i] / b.v[i])
#undef QPT_LANE_OP

    static f64 neg(f64 a) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = -a.v[i];
        return r;
    }
    static f64 fma(f64 a, f64 b, f64 c) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = std::fma(a.v[i], b.v[i], c.v[i]);
        return r;
    }
    static f64 round_nearest(f64 a) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = std::nearbyint(a.v[i]);
        return r;
    }
    static f64 floor(f64 a) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = std::floor(a.v[i]);
        return r;
    }
    static mask cmp_eq(f64 a, f64 b) {
        mask m;
        for (int i = 0; i < 4; ++i) m.v[i] = a.v[i] == b.v[i];
        return m;
    }
    static mask cmp_gt(f64 a, f64 b) {
        mask m;
        for (int i = 0; i < 4; ++i) m.v[i] = a.v[i] > b.v[i];
        return m;
    }
    static f64 select(mask m, f64 t, f64 f) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = m.v[i] ? t.v[i] : f.v[i];
        return r;
    }
    static i64 select_i(mask m, i64 t, i64 f) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = m.v[i] ? t.v[i] : f.v[i];
        return r;
    }
    static i64 to_bits(f64 a) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = std::bit_cast<std::int64_t>(a.v[i]);
        return r;
    }
    static f64 from_bits(i64 a) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = std::bit_cast<double>(a.v[i]);
        return r;
    }
    static i64 shr52(i64 a) {
        i64 r;
        for (int i = 0; i < 4; ++i)
            r.v[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(a.v[i]) >> 52);
        return r;
    }
    static i64 and_i(i64 a, i64 b) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] & b.v[i];
        return r;
    }
    static i64 or_i(i64 a, i64 b) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] | b.v[i];
        return r;
    }
    static i64 add_i(i64 a, i64 b) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    static i64 sub_i(i64 a, i64 b) {
        i64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = a.v[i] - b.v[i];
        return r;
    }
    static f64 to_f64(i64 a) {
        f64 r;
        for (int i = 0; i < 4; ++i) r.v[i] = static_cast<double>(a.v[i]);
        return r;
    }
    static double reduce_pairwise(f64 a) { return (a.v[0] + a.v[1]) + (a.v[2] + a.v[3]); }
};

}  // namespace

double chunk_log_survival_scalar(const double* a, const double* e, std::size_t n, double t) {
    return detail::kernel<lanes4>::chunk_log_survival(a, e, n, t);
}

double sinsq(double x) {
    const lanes4::f64 v = lanes4::set1(x);
    return detail::kernel<lanes4>::sinsq(v).v[0];
}

double log1p_nonpos(double y) {
    const lanes4::f64 v = lanes4::set1(y);
    return detail::kernel<lanes4>::log1p_nonpos(v).v[0];
}

}  // namespace qpt::kernel
