#include <cmath>
#include <numbers>

#include "vchain/kernels/theta_series.hpp"

namespace vchain::kernels {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

// Angles are pre-reduced: A and B only ever enter multiplied by integers,
// so replacing them by fmod(., 2 pi) shifts every angle by a multiple of
// 2 pi and keeps the arguments small for accurate evaluation.
PairSums theta_pair_sums_scalar(const ThetaSeries& ser, double A, double B) {
    A = std::fmod(A, kTwoPi);
    B = std::fmod(B, kTwoPi);
    const size_t n = ser.terms();
    double den = 0.0;
    double flx = 0.0;
    for (size_t ik = 0; ik < n; ++ik) {
        const double wk = ser.w[ik];
        const double kd = ser.kk[ik];
        const double c1 = kd * A - ser.pp[ik] * B;
        double t1 = 0.0;  // sum_s w_s cos(angle)
        double t2 = 0.0;  // sum_s w_s s cos(angle)
        for (size_t is = 0; is < n; ++is) {
            const double angle = c1 - ser.kk[is] * A + ser.pp[is] * B;
            const double u = ser.w[is] * std::cos(angle);
            t1 += u;
            t2 += u * ser.kk[is];
        }
        den += wk * t1;
        flx += wk * (t2 + (kd + 1.0) * t1);
    }
    return {den, flx};
}

std::complex<double> theta_psi_sum_scalar(const ThetaSeries& ser, double z, double alpha) {
    // exp(i pi alpha q^2/4) is 8-periodic in alpha (q odd), sin(pi q z) is
    // 2-periodic in z.
    alpha = std::fmod(alpha, 8.0);
    z = std::fmod(z, 2.0);
    const double pa4 = std::numbers::pi * alpha / 4.0;
    const double piz = std::numbers::pi * z;
    double re = 0.0;
    double im = 0.0;
    const size_t n = ser.q.size();
    for (size_t j = 0; j < n; ++j) {
        const double a1 = pa4 * ser.q2[j];
        const double s2 = std::sin(piz * ser.q[j]);
        const double u = ser.ws[j] * s2;
        re += u * std::cos(a1);
        im += u * std::sin(a1);
    }
    return {re, im};
}

double theta_timeavg_sum_scalar(const ThetaSeries& ser, double z) {
    z = std::fmod(z, 2.0);
    const double piz = std::numbers::pi * z;
    double acc = 0.0;
    const size_t n = ser.q.size();
    for (size_t j = 0; j < n; ++j) {
        const double s = std::sin(piz * ser.q[j]);
        acc += ser.w2[j] * s * s;
    }
    return acc;
}

}  // namespace vchain::kernels
