#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vchain/phase_point.hpp"
#include "vchain/theta.hpp"
#include "vchain/well.hpp"

namespace vchain {

/// Linear sizes of the phase sub-space box, one per derivative order:
/// widths[0] is the well width a, widths[1] the velocity-box size, etc.
/// The box occupies the positive orthant [0, w_0] x [0, w_1] x ...
struct PhaseBox {
    std::vector<double> widths;

    explicit PhaseBox(std::vector<double> widths_);
    int order() const { return static_cast<int>(widths.size()); }
    double width(int l) const { return widths[static_cast<size_t>(l)]; }
    /// Product of widths for levels l = 1..n-1 (the non-coordinate boxes).
    double upper_volume() const;
};

enum class BranchTag { B1, B2, B3, B4, Outside };

/// Velocity integration limits for the exact n=2 marginal, by region of
/// the (x, t) plane.  Inside the support strip 0 <= x < adot t + a the
/// four branches are disjoint and cover it (half-open convention, ties at
/// seams resolve to the lower-numbered branch).
struct Branch {
    BranchTag tag = BranchTag::Outside;
    double v1 = 0.0;
    double v2 = 0.0;
};

Branch classify_region(double x, double t, const PhaseBox& box);

/// Stationary phase-space density 2 (prod_l w_l)^{-1} sin^2(lambda eta_n),
/// a function of (p, t) only through the characteristic eta_n.
/// Zero once eta_n leaves [0, a].
double f_n_stationary(const PhasePoint& p, double t, const ModeConstants& mode,
                      const PhaseBox& box);

/// Comb-state lift F(eta_n(p, t), tau_n(t)) normalised over the box.
double f_n_theta(const PhasePoint& p, double t, const ThetaSolution& sol, const PhaseBox& box);

/// Lifted flux density f_n * <u> for the comb state (smooth through nodes).
double f_n_theta_flux_density(const PhasePoint& p, double t, const ThetaSolution& sol,
                              const PhaseBox& box);

/// Exact marginal density f_1(x, t) of the stationary n=2 lift.
double marginal_density(double x, double t, const ModeConstants& mode, const PhaseBox& box);

/// Exact mean velocity <v>(x, t); undefined where the density is below
/// `floor` (default 1e-12, in units of inverse length).
std::optional<double> marginal_flux(double x, double t, const ModeConstants& mode,
                                    const PhaseBox& box, double floor = 1e-12);

struct MarginalResult {
    double density = 0.0;
    std::optional<double> mean_flux;
};

MarginalResult marginal(double x, double t, const ModeConstants& mode, const PhaseBox& box,
                        double floor = 1e-12);

/// A characteristic-space density F(eta, tau) with known support in eta;
/// zero outside [support_lo, support_hi].
struct CharacteristicDensity {
    std::function<double(double, double)> eval;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// One marginalisation step: integrates the order-n lift of F over the
/// top derivative variable on [0, widths[n-1]] and divides by the box
/// volume of levels 1..n-1, where n = p_lower.order + 1.  The integration
/// variable enters through eta_n = eta_{n-1} - tau_{n-1}(t) w, so the
/// limits in eta are eta_{n-1} -+ tau_{n-1} widths[n-1]; at t = 0 the
/// interval collapses and the value reduces to widths[n-1] F(eta_{n-1},
/// tau_n) over the box volume.  Quadrature splits at the support edges.
double marginalize_general(const CharacteristicDensity& F, const PhasePoint& p_lower, double t,
                           const PhaseBox& box, int nodes = 32);

}  // namespace vchain
