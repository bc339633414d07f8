#pragma once

#include <complex>
#include <optional>

#include "vchain/kernels/theta_series.hpp"
#include "vchain/well.hpp"

namespace vchain {

/// Truncation control for the theta series.  The sums formally run over
/// all integers; the Gaussian weights exp(-pi beta (2k+1)^2 / 4) make an
/// a-priori cutoff exact-by-bound.
///
/// In adaptive mode, K is the cap and the effective bound is the smallest
/// K' <= K whose relative weight w_{K'} / w_0 drops below term_tol; the
/// construction fails if no such K' exists.  In fixed mode K is used as-is.
struct TruncationPolicy {
    enum class Mode { adaptive, fixed };
    Mode mode = Mode::adaptive;
    int K = 512;
    double term_tol = 1e-16;

    void validate() const;
};

/// Theta function per the convention used throughout this library:
///
///   theta1(z, tc) = sum_k exp(i pi tc (2k+1)^2 / 4 + i pi (2z+1)(2k+1) / 2)
///
/// which differs from the textbook Jacobi theta_1 by argument scaling and
/// a sign: theta1(z, tc) = -theta1_std(pi z | tc).  Requires Im(tc) > 0.
std::complex<double> theta1(std::complex<double> z, std::complex<double> tau_c,
                            const TruncationPolicy& trunc = {});

/// The (mu, beta)-parameterised comb state of the infinite well.
///
/// psi(eta, tau) = theta1(mu eta / a, -tau / T_mu + i beta) / sqrt(N(beta))
/// with N(beta) = a sum_k exp(-pi beta (2k+1)^2 / 2).  The density admits
/// two evaluation routes: |psi|^2 and the direct double sum over (s, k)
/// with Chebyshev factor T_|k-s|(cos vartheta) = cos(|k-s| vartheta); the
/// implementation keeps both so they can check each other.
///
/// Immutable after construction; all evaluations are pure and thread-safe.
class ThetaSolution {
  public:
    ThetaSolution(const WellParams& params, int mu, double beta,
                  const TruncationPolicy& trunc = {});

    const WellParams& params() const { return params_; }
    const ModeConstants& mode() const { return mode_; }
    double beta() const { return beta_; }
    /// Normalisation N(beta) > 0.
    double norm() const { return norm_; }
    /// Effective series bound actually in use.
    int effective_terms() const { return series_.K; }
    const kernels::ThetaSeries& series() const { return series_; }

    double density_floor() const { return density_floor_; }
    void set_density_floor(double f) { density_floor_ = f; }

    /// Wavefunction; zero at both walls.  Throws outside [0, a].
    std::complex<double> psi(double eta, double tau) const;
    /// Analytic eta-derivatives of psi (order 1 or 2).
    std::complex<double> psi_deta(double eta, double tau, int order = 1) const;
    /// Analytic tau-derivative of psi.
    std::complex<double> psi_dtau(double eta, double tau) const;

    /// Density via the (s, k) double sum.
    double density(double eta, double tau) const;
    /// Density via |psi|^2 — the independent second route.
    double density_from_psi(double eta, double tau) const;

    /// Mean flux; undefined (nullopt) where the density sits below the floor.
    std::optional<double> flux(double eta, double tau) const;
    /// density * flux, which is smooth through the density nodes.
    double flux_density(double eta, double tau) const;

    /// Average of the density over one period T_mu (closed form).
    double time_averaged_density(double eta) const;

    /// Phase angle vartheta_{s,k} = pi (2 mu eta/a + 1) - pi tau (s+k+1) / T_mu.
    double vartheta(double eta, double tau, int s, int k) const;

  private:
    void check_domain(double eta) const;
    /// A = pi (2 mu eta / a + 1), B = pi tau / T_mu.
    double angle_a(double eta) const;
    double angle_b(double tau) const;

    WellParams params_;
    ModeConstants mode_;
    double beta_;
    TruncationPolicy trunc_;
    kernels::ThetaSeries series_;
    double norm_ = 0.0;
    double density_floor_ = 1e-12;
};

}  // namespace vchain
