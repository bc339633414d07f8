#pragma once

#include <complex>
#include <vector>

namespace vchain::kernels {

/// Precomputed term data for the theta-comb series of one (mu, beta) state.
///
/// The unfolded index k runs over [-K-1, K] (closed under k -> -k-1), with
/// Gaussian weights w_k = exp(-pi beta (2k+1)^2 / 4).  The folded arrays
/// cover j = 0..K with q_j = 2j+1 and pair the terms k = j and k = -j-1.
///
/// Kernel contracts, with A = pi (2 mu eta/a + 1), B = pi tau / T_mu,
/// z = mu eta / a, alpha = -tau / T_mu:
///
///   pair_sums:   den = sum_{s,k} w_s w_k cos((k-s) A - (P_k - P_s) B)
///                flx = sum_{s,k} w_s w_k (s+k+1) cos(same angle)
///                where P_k = k^2 + k; the angle equals (k-s) theta_{s,k}.
///   psi_sum:     sum_j (-1)^j w_j exp(i pi alpha q_j^2 / 4) sin(pi q_j z)
///                (the theta series folds to -2 times this for real z).
///   timeavg_sum: sum_j w_j^2 sin^2(pi q_j z).
struct ThetaSeries {
    int K = 0;
    double beta = 0.0;
    // unfolded, size 2K+2, entry i corresponds to k = i - K - 1
    std::vector<double> kk;    // k as double
    std::vector<double> pp;    // k^2 + k
    std::vector<double> w;     // exp(-pi beta (2k+1)^2 / 4)
    // folded, size K+1
    std::vector<double> q;     // 2j+1
    std::vector<double> q2;    // (2j+1)^2
    std::vector<double> ws;    // (-1)^j w_j
    std::vector<double> w2;    // w_j^2

    size_t terms() const { return w.size(); }
};

struct PairSums {
    double den = 0.0;
    double flx = 0.0;
};

using PairSumsFn = PairSums (*)(const ThetaSeries&, double A, double B);
using PsiSumFn = std::complex<double> (*)(const ThetaSeries&, double z, double alpha);
using TimeAvgSumFn = double (*)(const ThetaSeries&, double z);

PairSums theta_pair_sums_scalar(const ThetaSeries& ser, double A, double B);
std::complex<double> theta_psi_sum_scalar(const ThetaSeries& ser, double z, double alpha);
double theta_timeavg_sum_scalar(const ThetaSeries& ser, double z);

#ifndef VCHAIN_NO_AVX2
PairSums theta_pair_sums_avx2(const ThetaSeries& ser, double A, double B);
std::complex<double> theta_psi_sum_avx2(const ThetaSeries& ser, double z, double alpha);
double theta_timeavg_sum_avx2(const ThetaSeries& ser, double z);

/// Test hook: vectorised sin/cos of four doubles (|x| <= 1e6).
void sincos4_avx2(const double x[4], double s[4], double c[4]);
#endif

}  // namespace vchain::kernels
