#pragma once

#include <string>
#include <vector>

#include "vchain/bridge.hpp"
#include "vchain/chain_lift.hpp"
#include "vchain/cli/io.hpp"
#include "vchain/theta.hpp"

namespace vchain::cli {

/// Independent quadrature oracles for the exact n=2 marginals: Gauss-
/// Legendre integration of the stationary characteristic density over the
/// branch velocity interval, never touching the closed forms.
double marginal_density_oracle(double x, double t, const ModeConstants& mode,
                               const PhaseBox& box, int nodes = 64);
std::optional<double> marginal_flux_oracle(double x, double t, const ModeConstants& mode,
                                           const PhaseBox& box, int nodes = 64,
                                           double floor = 1e-12);

/// Interior local maxima of a sampled row.  A peak must exceed both
/// neighbours by prominence_rel times the row maximum; the exact marginal
/// has exactly-flat stretches whose last-bit noise must not count.
int count_interior_maxima(const std::vector<double>& values, double prominence_rel = 1e-9);

/// Measured sup distances for the sign-flip candidates in the second half
/// of the period.  Diagnostic: the half-period shifts are not identities;
/// the time reflection tau -> T - tau is (pointwise in eta), which is the
/// sense in which the late-period flux is the reversed early-period flux.
struct HalfPeriodFluxProbe {
    double shift_pointwise = 0.0;    // sup |u(eta, tau + T/2) + u(eta, tau)|
    double shift_reflected = 0.0;    // sup |u(a - eta, tau + T/2) + u(eta, tau)|
    double reverse_pointwise = 0.0;  // sup |u(eta, T - tau) + u(eta, tau)|
    double reverse_reflected = 0.0;  // sup |u(a - eta, T - tau) + u(eta, tau)|
};
HalfPeriodFluxProbe probe_half_period_flux(const ThetaSolution& sol, int n_eta, int n_tau);

/// Full verification battery; every entry carries its pinned tolerance.
/// config.negative_control == "flux-parse" swaps a deliberately mis-parsed
/// flux series into the continuity check, which must then fail.
std::vector<ResidualReport> run_verification(const RunConfig& config);

std::string reports_to_json(const std::vector<ResidualReport>& reports);
bool all_pass(const std::vector<ResidualReport>& reports);

}  // namespace vchain::cli
