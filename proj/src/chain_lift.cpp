#include "vchain/chain_lift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vchain/characteristics.hpp"
#include "vchain/quadrature.hpp"

namespace vchain {

namespace {

// sin(u)/u with a series switch; the direct form loses nothing above the
// threshold and the series is accurate to ~1e-30 below it.
double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

// (sin u - u cos u) / u^2, the second moment companion of sinc.
double sinc_moment(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return u / 3.0 - u * u2 / 30.0 + u * u2 * u2 / 840.0;
    }
    return (std::sin(u) - u * std::cos(u)) / (u * u);
}

void check_box_matches_mode(const PhaseBox& box, const ModeConstants& mode) {
    const double expect = std::numbers::pi * mode.mu;
    if (std::abs(mode.lambda * box.width(0) - expect) > 1e-9 * expect) {
        throw std::invalid_argument("PhaseBox width(0) does not match the mode's well width");
    }
}

}  // namespace

PhaseBox::PhaseBox(std::vector<double> widths_) : widths(std::move(widths_)) {
    if (widths.empty()) throw std::invalid_argument("PhaseBox: needs at least one width");
    for (double w : widths) {
        if (!(w > 0.0)) throw std::invalid_argument("PhaseBox: widths must be positive");
    }
}

double PhaseBox::upper_volume() const {
    double v = 1.0;
    for (size_t l = 1; l < widths.size(); ++l) v *= widths[l];
    return v;
}

Branch classify_region(double x, double t, const PhaseBox& box) {
    if (box.order() < 2) throw std::invalid_argument("classify_region: box must have order >= 2");
    if (t < 0.0) throw std::invalid_argument("classify_region: t must be >= 0");
    const double a = box.width(0);
    const double adot = box.width(1);

    if (x < 0.0 || x >= adot * t + a) return {BranchTag::Outside, 0.0, 0.0};

    if (t == 0.0) {
        // Degenerate full-velocity case; x < a here by the strip test.
        return {BranchTag::B2, 0.0, adot};
    }

    const double t_cross = a / adot;
    if (t < t_cross) {
        if (x < adot * t) return {BranchTag::B1, 0.0, x / t};
        if (x < a) return {BranchTag::B2, 0.0, adot};
        return {BranchTag::B4, (x - a) / t, adot};
    }
    if (x < a) return {BranchTag::B1, 0.0, x / t};
    if (x < adot * t) return {BranchTag::B3, (x - a) / t, x / t};
    return {BranchTag::B4, (x - a) / t, adot};
}

double f_n_stationary(const PhasePoint& p, double t, const ModeConstants& mode,
                      const PhaseBox& box) {
    if (p.dimension != 1) throw std::invalid_argument("f_n_stationary: 1-D points only");
    if (p.order != box.order()) {
        throw std::invalid_argument("f_n_stationary: point order must match box order");
    }
    check_box_matches_mode(box, mode);
    const double a = box.width(0);
    const double e = eta1(p, t);
    if (e < 0.0 || e > a) return 0.0;
    const double s = std::sin(mode.lambda * e);
    return 2.0 / (a * box.upper_volume()) * s * s;
}

double f_n_theta(const PhasePoint& p, double t, const ThetaSolution& sol, const PhaseBox& box) {
    if (p.dimension != 1) throw std::invalid_argument("f_n_theta: 1-D points only");
    if (p.order != box.order()) {
        throw std::invalid_argument("f_n_theta: point order must match box order");
    }
    check_box_matches_mode(box, sol.mode());
    const double a = box.width(0);
    const double e = eta1(p, t);
    if (e < 0.0 || e > a) return 0.0;
    return sol.density(e, tau(p.order, t)) / box.upper_volume();
}

double f_n_theta_flux_density(const PhasePoint& p, double t, const ThetaSolution& sol,
                              const PhaseBox& box) {
    if (p.order != box.order()) {
        throw std::invalid_argument("f_n_theta_flux_density: point order must match box order");
    }
    const double a = box.width(0);
    const double e = eta1(p, t);
    if (e < 0.0 || e > a) return 0.0;
    return sol.flux_density(e, tau(p.order, t)) / box.upper_volume();
}

double marginal_density(double x, double t, const ModeConstants& mode, const PhaseBox& box) {
    check_box_matches_mode(box, mode);
    const Branch br = classify_region(x, t, box);
    if (br.tag == BranchTag::Outside) return 0.0;
    const double a = box.width(0);
    const double adot = box.width(1);
    const double dv = br.v2 - br.v1;
    // (1/adot) int_{v1}^{v2} (1/a)(1 - cos 2 lambda (x - v t)) dv in the
    // form (dv / (a adot)) [1 - cos(lambda Sigma) sinc(lambda t dv)], which
    // is regular at t -> 0.
    const double sigma = 2.0 * x - (br.v1 + br.v2) * t;
    const double u = mode.lambda * t * dv;
    return dv / (a * adot) * (1.0 - std::cos(mode.lambda * sigma) * sinc(u));
}

std::optional<double> marginal_flux(double x, double t, const ModeConstants& mode,
                                    const PhaseBox& box, double floor) {
    check_box_matches_mode(box, mode);
    const Branch br = classify_region(x, t, box);
    if (br.tag == BranchTag::Outside) return std::nullopt;
    const double a = box.width(0);
    const double adot = box.width(1);
    const double dv = br.v2 - br.v1;
    const double sigma = 2.0 * x - (br.v1 + br.v2) * t;
    const double u = mode.lambda * t * dv;
    const double core = 1.0 - std::cos(mode.lambda * sigma) * sinc(u);
    const double f1 = dv / (a * adot) * core;
    if (f1 < floor) return std::nullopt;
    // <v> f1 = (1/adot) int v F(x - v t) dv, written with the same regular
    // kernels; equivalent to the textbook 1/t form away from t = 0.
    const double mean = 0.5 * (br.v1 + br.v2);
    const double num = mean * core - 0.5 * dv * std::sin(mode.lambda * sigma) * sinc_moment(u);
    return num / core;
}

MarginalResult marginal(double x, double t, const ModeConstants& mode, const PhaseBox& box,
                        double floor) {
    return {marginal_density(x, t, mode, box), marginal_flux(x, t, mode, box, floor)};
}

double marginalize_general(const CharacteristicDensity& F, const PhasePoint& p_lower, double t,
                           const PhaseBox& box, int nodes) {
    const int n = p_lower.order + 1;
    if (box.order() != n) {
        throw std::invalid_argument("marginalize_general: box order must be p_lower.order + 1");
    }
    if (p_lower.dimension != 1) {
        throw std::invalid_argument("marginalize_general: 1-D points only");
    }
    const double width = box.width(n - 1);
    const double tau_lim = tau(n - 1, t);
    const double tau_time = tau(n, t);
    const double eta_low = eta1(p_lower, t);

    // eta(w) = eta_low - tau_lim w is affine; split [0, width] where it
    // crosses the support edges so each panel integrates a smooth piece.
    std::vector<double> cuts{0.0, width};
    if (tau_lim != 0.0) {
        for (double edge : {F.support_lo, F.support_hi}) {
            const double w = (eta_low - edge) / tau_lim;
            if (w > 0.0 && w < width) cuts.push_back(w);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    const auto integrand = [&](double w) {
        const double e = eta_low - tau_lim * w;
        if (e < F.support_lo || e > F.support_hi) return 0.0;
        return F.eval(e, tau_time);
    };

    double acc = 0.0;
    const GaussLegendre rule(nodes);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-300) continue;
        acc += rule.integrate(integrand, cuts[i], cuts[i + 1]);
    }
    return acc / box.upper_volume();
}

}  // namespace vchain
