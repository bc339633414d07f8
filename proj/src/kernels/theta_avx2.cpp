// AVX2 variants of the theta-series kernels.  Compiled with -mavx2 -mfma;
// runtime selection lives in backend.cpp.  Each kernel falls back to the
// scalar reference when the reduced angles would leave the domain of the
// vectorised sin/cos below.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "vchain/kernels/theta_series.hpp"

namespace vchain::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest |x| for which j = round(x 2/pi) keeps j * kPio2A exact
// (33-bit constant, |j| < 2^20) with headroom.
constexpr double kMaxVecArg = 1.0e6;

constexpr double kTwoOverPi = 6.36619772367581382433e-01;
// Cody–Waite split of pi/2: 33 + 33 + 53 significant bits.
constexpr double kPio2A = 1.57079632673412561417e+00;
constexpr double kPio2B = 6.07710050630396597660e-11;
constexpr double kPio2C = 2.02226624871116645580e-21;

// Minimax coefficients on [-pi/4, pi/4] (Cephes sincof / coscof).
constexpr double kS0 = 1.58962301576546568060e-10;
constexpr double kS1 = -2.50507477628578072866e-8;
constexpr double kS2 = 2.75573136213857245213e-6;
constexpr double kS3 = -1.98412698295895385996e-4;
constexpr double kS4 = 8.33333333332211858878e-3;
constexpr double kS5 = -1.66666666666666307295e-1;
constexpr double kC0 = -1.13585365213876817300e-11;
constexpr double kC1 = 2.08757008419747316778e-9;
constexpr double kC2 = -2.75573141792967388112e-7;
constexpr double kC3 = 2.48015872888517179954e-5;
constexpr double kC4 = -1.38888888888730564116e-3;
constexpr double kC5 = 4.16666666666665929218e-2;

inline __m256d widen_mask(__m128i m32) {
    return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m32));
}

inline void sincos4(__m256d x, __m256d* s, __m256d* c) {
    const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m128i q = _mm256_cvtpd_epi32(j);

    __m256d r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2A), x);
    r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2B), r);
    r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2C), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(kS0);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS1));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS5));
    ps = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);  // r + r z P(z)

    __m256d pc = _mm256_set1_pd(kC0);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC1));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC5));
    pc = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                         _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

    // Quadrant fix-up: q odd swaps sin/cos; q in {2,3} negates sin,
    // q in {1,2} negates cos.
    const __m128i one = _mm_set1_epi32(1);
    const __m128i two = _mm_set1_epi32(2);
    const __m256d swap = widen_mask(_mm_cmpeq_epi32(_mm_and_si128(q, one), one));
    const __m256d sneg = widen_mask(_mm_cmpeq_epi32(_mm_and_si128(q, two), two));
    const __m256d cneg =
        widen_mask(_mm_cmpeq_epi32(_mm_and_si128(_mm_add_epi32(q, one), two), two));

    __m256d sv = _mm256_blendv_pd(ps, pc, swap);
    __m256d cv = _mm256_blendv_pd(pc, ps, swap);
    const __m256d signbit = _mm256_set1_pd(-0.0);
    sv = _mm256_xor_pd(sv, _mm256_and_pd(sneg, signbit));
    cv = _mm256_xor_pd(cv, _mm256_and_pd(cneg, signbit));
    *s = sv;
    *c = cv;
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

void sincos4_avx2(const double x[4], double s[4], double c[4]) {
    __m256d vs, vc;
    sincos4(_mm256_loadu_pd(x), &vs, &vc);
    _mm256_storeu_pd(s, vs);
    _mm256_storeu_pd(c, vc);
}

PairSums theta_pair_sums_avx2(const ThetaSeries& ser, double A, double B) {
    A = std::fmod(A, kTwoPi);
    B = std::fmod(B, kTwoPi);
    const size_t n = ser.terms();
    const double kmax = static_cast<double>(ser.K) + 1.0;
    const double pmax = ser.pp.front();  // K^2 + K at both ends of the range
    if (2.0 * kmax * std::abs(A) + 2.0 * pmax * std::abs(B) > kMaxVecArg || n < 4) {
        return theta_pair_sums_scalar(ser, A, B);
    }

    const __m256d vA = _mm256_set1_pd(A);
    const __m256d vB = _mm256_set1_pd(B);
    const size_t nvec = n & ~size_t(3);
    __m256d accD = _mm256_setzero_pd();
    __m256d accF = _mm256_setzero_pd();
    double tailD = 0.0;
    double tailF = 0.0;

    for (size_t ik = 0; ik < n; ++ik) {
        const double wk = ser.w[ik];
        const double kd = ser.kk[ik];
        const double c1 = kd * A - ser.pp[ik] * B;
        const __m256d vc1 = _mm256_set1_pd(c1);
        __m256d t1 = _mm256_setzero_pd();
        __m256d t2 = _mm256_setzero_pd();
        for (size_t is = 0; is < nvec; is += 4) {
            const __m256d vs = _mm256_loadu_pd(&ser.kk[is]);
            const __m256d vp = _mm256_loadu_pd(&ser.pp[is]);
            const __m256d vw = _mm256_loadu_pd(&ser.w[is]);
            const __m256d ang = _mm256_fmadd_pd(vp, vB, _mm256_fnmadd_pd(vs, vA, vc1));
            __m256d sn, cs;
            sincos4(ang, &sn, &cs);
            const __m256d u = _mm256_mul_pd(vw, cs);
            t1 = _mm256_add_pd(t1, u);
            t2 = _mm256_fmadd_pd(u, vs, t2);
        }
        accD = _mm256_fmadd_pd(_mm256_set1_pd(wk), t1, accD);
        accF = _mm256_fmadd_pd(_mm256_set1_pd(wk), t2, accF);
        accF = _mm256_fmadd_pd(_mm256_set1_pd(wk * (kd + 1.0)), t1, accF);
        for (size_t is = nvec; is < n; ++is) {
            const double angle = c1 - ser.kk[is] * A + ser.pp[is] * B;
            const double u = wk * ser.w[is] * std::cos(angle);
            tailD += u;
            tailF += u * (ser.kk[is] + kd + 1.0);
        }
    }
    return {hsum(accD) + tailD, hsum(accF) + tailF};
}

std::complex<double> theta_psi_sum_avx2(const ThetaSeries& ser, double z, double alpha) {
    alpha = std::fmod(alpha, 8.0);
    z = std::fmod(z, 2.0);
    const double pa4 = std::numbers::pi * alpha / 4.0;
    const double piz = std::numbers::pi * z;
    const size_t n = ser.q.size();
    if (std::abs(pa4) * ser.q2.back() > kMaxVecArg || n < 4) {
        return theta_psi_sum_scalar(ser, z, alpha);
    }

    const size_t nvec = n & ~size_t(3);
    __m256d accRe = _mm256_setzero_pd();
    __m256d accIm = _mm256_setzero_pd();
    for (size_t j = 0; j < nvec; j += 4) {
        const __m256d a1 = _mm256_mul_pd(_mm256_loadu_pd(&ser.q2[j]), _mm256_set1_pd(pa4));
        const __m256d a2 = _mm256_mul_pd(_mm256_loadu_pd(&ser.q[j]), _mm256_set1_pd(piz));
        __m256d s1, c1, s2, c2;
        sincos4(a1, &s1, &c1);
        sincos4(a2, &s2, &c2);
        const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(&ser.ws[j]), s2);
        accRe = _mm256_fmadd_pd(u, c1, accRe);
        accIm = _mm256_fmadd_pd(u, s1, accIm);
    }
    double re = hsum(accRe);
    double im = hsum(accIm);
    for (size_t j = nvec; j < n; ++j) {
        const double a1 = pa4 * ser.q2[j];
        const double u = ser.ws[j] * std::sin(piz * ser.q[j]);
        re += u * std::cos(a1);
        im += u * std::sin(a1);
    }
    return {re, im};
}

double theta_timeavg_sum_avx2(const ThetaSeries& ser, double z) {
    z = std::fmod(z, 2.0);
    const double piz = std::numbers::pi * z;
    const size_t n = ser.q.size();
    const size_t nvec = n & ~size_t(3);
    __m256d acc = _mm256_setzero_pd();
    for (size_t j = 0; j < nvec; j += 4) {
        const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(&ser.q[j]), _mm256_set1_pd(piz));
        __m256d s, c;
        sincos4(a, &s, &c);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(&ser.w2[j]), s), s, acc);
    }
    double out = hsum(acc);
    for (size_t j = nvec; j < n; ++j) {
        const double s = std::sin(piz * ser.q[j]);
        out += ser.w2[j] * s * s;
    }
    return out;
}

}  // namespace vchain::kernels
