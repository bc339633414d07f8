#include "vchain/well.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vchain {

namespace {
constexpr double kPi = std::numbers::pi;

void check_in_well(double eta, double a, const char* who) {
    if (!(eta >= 0.0 && eta <= a)) {
        throw std::domain_error(std::string(who) + ": eta outside [0, a]");
    }
}
}  // namespace

WellParams::WellParams(double m_, double hbar_, double a_) : m(m_), hbar(hbar_), a(a_) {
    if (!(m > 0.0) || !(hbar > 0.0) || !(a > 0.0)) {
        throw std::invalid_argument("WellParams: m, hbar, a must all be positive");
    }
}

ModeConstants ModeConstants::make(const WellParams& params, int mu) {
    if (mu < 1) throw std::invalid_argument("ModeConstants: mu must be a positive integer");
    ModeConstants mc;
    mc.mu = mu;
    mc.lambda = kPi * mu / params.a;
    mc.energy = kPi * kPi * params.hbar * params.hbar * mu * mu / (2.0 * params.m * params.a * params.a);
    mc.eps = mc.energy / (kPi * kPi);
    mc.period = kPi * params.hbar / (4.0 * mc.energy);

    // Cross-checks between the equivalent closed forms.
    const double period_alt = params.m * params.a * params.a / (2.0 * kPi * params.hbar * mu * mu);
    if (std::abs(mc.lambda * params.a - kPi * mu) > 1e-12 * kPi * mu ||
        std::abs(mc.period - period_alt) > 1e-12 * period_alt) {
        throw std::logic_error("ModeConstants: internal consistency check failed");
    }
    return mc;
}

double energy(const ModeConstants& mode) { return mode.energy; }

std::complex<double> psi_stationary(double eta, double tau, const ModeConstants& mode,
                                    const WellParams& params) {
    check_in_well(eta, params.a, "psi_stationary");
    const double wavenumber = std::sqrt(2.0 * params.m * mode.energy) / params.hbar;
    const double amp = std::sqrt(2.0 / params.a) * std::sin(wavenumber * eta);
    const double phase = -mode.energy * tau / params.hbar;
    return {amp * std::cos(phase), amp * std::sin(phase)};
}

double density_stationary(double eta, const ModeConstants& mode, const WellParams& params) {
    check_in_well(eta, params.a, "density_stationary");
    const double s = std::sin(mode.lambda * eta);
    return 2.0 / params.a * s * s;
}

}  // namespace vchain
