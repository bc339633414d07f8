#include "vchain/theta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vchain/kernels/backend.hpp"

namespace vchain {

namespace {
constexpr double kPi = std::numbers::pi;

kernels::ThetaSeries build_series(double beta, const TruncationPolicy& trunc) {
    trunc.validate();
    if (!(beta > 0.0)) {
        throw std::domain_error("theta series: beta must be strictly positive");
    }

    int K = trunc.K;
    if (trunc.mode == TruncationPolicy::Mode::adaptive) {
        // Smallest K with w_K / w_0 = exp(-pi beta ((2K+1)^2 - 1)/4) < term_tol.
        const double need = -4.0 * std::log(trunc.term_tol) / (kPi * beta) + 1.0;
        const int k_req = static_cast<int>(std::ceil((std::sqrt(need) - 1.0) / 2.0));
        if (k_req > trunc.K) {
            throw std::domain_error(
                "theta series: truncation cap too small for requested term_tol at this beta");
        }
        K = std::max(1, k_req);
    }

    kernels::ThetaSeries ser;
    ser.K = K;
    ser.beta = beta;
    const size_t n = static_cast<size_t>(2 * K + 2);
    ser.kk.resize(n);
    ser.pp.resize(n);
    ser.w.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(static_cast<int>(i) - K - 1);
        const double q = 2.0 * k + 1.0;
        ser.kk[i] = k;
        ser.pp[i] = k * k + k;
        ser.w[i] = std::exp(-kPi * beta * q * q / 4.0);
    }
    ser.q.resize(K + 1);
    ser.q2.resize(K + 1);
    ser.ws.resize(K + 1);
    ser.w2.resize(K + 1);
    for (int j = 0; j <= K; ++j) {
        const double q = 2.0 * j + 1.0;
        const double w = std::exp(-kPi * beta * q * q / 4.0);
        ser.q[j] = q;
        ser.q2[j] = q * q;
        ser.ws[j] = (j % 2 == 0) ? w : -w;
        ser.w2[j] = w * w;
    }
    return ser;
}

}  // namespace

void TruncationPolicy::validate() const {
    if (K < 1) throw std::invalid_argument("TruncationPolicy: K must be >= 1");
    if (!(term_tol > 0.0 && term_tol < 1.0)) {
        throw std::invalid_argument("TruncationPolicy: term_tol must lie in (0, 1)");
    }
}

std::complex<double> theta1(std::complex<double> z, std::complex<double> tau_c,
                            const TruncationPolicy& trunc) {
    trunc.validate();
    const double beta_c = tau_c.imag();
    if (!(beta_c > 0.0)) {
        throw std::domain_error("theta1: series requires Im(tau_c) > 0");
    }

    // Terms for k and -k-1 share q^2 = (2k+1)^2 and pair into a cosine:
    //   theta1 = 2 sum_{j>=0} exp(i pi tau_c q_j^2 / 4) cos(pi q_j (2z+1) / 2).
    const std::complex<double> i_pi_tc_4 = std::complex<double>(0.0, kPi / 4.0) * tau_c;
    const double half_pi_re = kPi * (2.0 * z.real() + 1.0) / 2.0;
    const double half_pi_im = kPi * z.imag();  // Im of pi (2z+1)/2

    std::complex<double> sum = 0.0;
    double max_env = 0.0;
    for (int j = 0; j <= trunc.K; ++j) {
        const double q = 2.0 * j + 1.0;
        const std::complex<double> term =
            2.0 * std::exp(i_pi_tc_4 * (q * q)) *
            std::cos(std::complex<double>(half_pi_re * q, half_pi_im * q));
        sum += term;
        // Envelope bound on |term|; the Gaussian factor eventually beats the
        // exponential growth from Im(z), so once the envelope drops below
        // term_tol relative to its peak the remaining tail is negligible.
        const double envelope =
            std::exp(-kPi * beta_c * q * q / 4.0 + kPi * q * std::abs(z.imag()));
        max_env = std::max(max_env, envelope);
        if (trunc.mode == TruncationPolicy::Mode::adaptive && j >= 1 &&
            envelope < trunc.term_tol * max_env) {
            return sum;
        }
    }
    if (trunc.mode == TruncationPolicy::Mode::fixed) return sum;
    throw std::domain_error("theta1: truncation cap reached before convergence");
}

ThetaSolution::ThetaSolution(const WellParams& params, int mu, double beta,
                             const TruncationPolicy& trunc)
    : params_(params),
      mode_(ModeConstants::make(params, mu)),
      beta_(beta),
      trunc_(trunc),
      series_(build_series(beta, trunc)) {
    // N(beta) = a sum_k exp(-pi beta (2k+1)^2 / 2) over the same index set
    // as the series, which folds to 2a sum_{j>=0} w_j^2.
    double s = 0.0;
    for (double w2 : series_.w2) s += w2;
    norm_ = 2.0 * params_.a * s;
    if (!(norm_ > 0.0)) throw std::domain_error("ThetaSolution: N(beta) must be positive");
}

void ThetaSolution::check_domain(double eta) const {
    if (!(eta >= 0.0 && eta <= params_.a)) {
        throw std::domain_error("ThetaSolution: eta outside [0, a]");
    }
}

double ThetaSolution::angle_a(double eta) const {
    return kPi * (2.0 * mode_.mu * eta / params_.a + 1.0);
}

double ThetaSolution::angle_b(double tau) const { return kPi * tau / mode_.period; }

std::complex<double> ThetaSolution::psi(double eta, double tau) const {
    check_domain(eta);
    const double z = mode_.mu * eta / params_.a;
    const double alpha = -tau / mode_.period;
    const std::complex<double> s = kernels::active_kernels().psi_sum(series_, z, alpha);
    return -2.0 / std::sqrt(norm_) * s;
}

std::complex<double> ThetaSolution::psi_deta(double eta, double tau, int order) const {
    check_domain(eta);
    if (order != 1 && order != 2) {
        throw std::invalid_argument("psi_deta: order must be 1 or 2");
    }
    const double z = std::fmod(mode_.mu * eta / params_.a, 2.0);
    const double alpha = std::fmod(-tau / mode_.period, 8.0);
    const double pa4 = kPi * alpha / 4.0;
    const double piz = kPi * z;
    const double dz = kPi * mode_.mu / params_.a;  // d(pi q z)/d eta per unit q
    std::complex<double> acc = 0.0;
    for (size_t j = 0; j < series_.q.size(); ++j) {
        const double q = series_.q[j];
        const double a1 = pa4 * series_.q2[j];
        const std::complex<double> rot{std::cos(a1), std::sin(a1)};
        const double spatial = (order == 1) ? q * dz * std::cos(piz * q)
                                            : -q * q * dz * dz * std::sin(piz * q);
        acc += series_.ws[j] * spatial * rot;
    }
    return -2.0 / std::sqrt(norm_) * acc;
}

std::complex<double> ThetaSolution::psi_dtau(double eta, double tau) const {
    check_domain(eta);
    const double z = std::fmod(mode_.mu * eta / params_.a, 2.0);
    const double alpha = std::fmod(-tau / mode_.period, 8.0);
    const double pa4 = kPi * alpha / 4.0;
    const double piz = kPi * z;
    // d/dtau exp(i pi alpha q^2/4) = -i pi q^2 / (4 T_mu) * exp(...)
    const std::complex<double> fac{0.0, -kPi / (4.0 * mode_.period)};
    std::complex<double> acc = 0.0;
    for (size_t j = 0; j < series_.q.size(); ++j) {
        const double a1 = pa4 * series_.q2[j];
        const std::complex<double> rot{std::cos(a1), std::sin(a1)};
        acc += series_.ws[j] * std::sin(piz * series_.q[j]) * series_.q2[j] * rot;
    }
    return -2.0 / std::sqrt(norm_) * fac * acc;
}

double ThetaSolution::density(double eta, double tau) const {
    check_domain(eta);
    const auto sums = kernels::active_kernels().pair_sums(series_, angle_a(eta), angle_b(tau));
    return sums.den / norm_;
}

double ThetaSolution::density_from_psi(double eta, double tau) const {
    return std::norm(psi(eta, tau));
}

std::optional<double> ThetaSolution::flux(double eta, double tau) const {
    check_domain(eta);
    const auto sums = kernels::active_kernels().pair_sums(series_, angle_a(eta), angle_b(tau));
    if (sums.den / norm_ < density_floor_) return std::nullopt;
    return params_.a / (2.0 * mode_.mu * mode_.period) * sums.flx / sums.den;
}

double ThetaSolution::flux_density(double eta, double tau) const {
    check_domain(eta);
    const auto sums = kernels::active_kernels().pair_sums(series_, angle_a(eta), angle_b(tau));
    return params_.a / (2.0 * mode_.mu * mode_.period) * sums.flx / norm_;
}

double ThetaSolution::time_averaged_density(double eta) const {
    check_domain(eta);
    const double z = mode_.mu * eta / params_.a;
    return 4.0 / norm_ * kernels::active_kernels().timeavg_sum(series_, z);
}

double ThetaSolution::vartheta(double eta, double tau, int s, int k) const {
    return angle_a(eta) - angle_b(tau) * (s + k + 1);
}

}  // namespace vchain
