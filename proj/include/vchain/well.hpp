#pragma once

#include <complex>

namespace vchain {

/// Physical constants of the infinite square well: mass, action constant
/// and well width. All strictly positive.
struct WellParams {
    double m = 1.0;
    double hbar = 1.0;
    double a = 0.5;

    WellParams() = default;
    WellParams(double m_, double hbar_, double a_);
};

/// Per-mode derived quantities of the well state mu.
///
///   lambda = pi mu / a        wavenumber
///   energy = pi^2 hbar^2 mu^2 / (2 m a^2)
///   eps    = energy / pi^2
///   period = pi hbar / (4 energy) = m a^2 / (2 pi hbar mu^2)
struct ModeConstants {
    int mu = 1;
    double lambda = 0.0;
    double energy = 0.0;
    double eps = 0.0;
    double period = 0.0;

    static ModeConstants make(const WellParams& params, int mu);
};

double energy(const ModeConstants& mode);

/// Stationary mode sqrt(2/a) sin(sqrt(2 m E)/hbar eta) exp(-i E tau / hbar).
/// Throws std::domain_error outside [0, a] (the potential is infinite there).
std::complex<double> psi_stationary(double eta, double tau, const ModeConstants& mode,
                                    const WellParams& params);

/// (2/a) sin^2(lambda eta); the associated mean flux is identically zero.
double density_stationary(double eta, const ModeConstants& mode, const WellParams& params);

}  // namespace vchain
