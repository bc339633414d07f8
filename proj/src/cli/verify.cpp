#include "vchain/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "vchain/characteristics.hpp"
#include "vchain/kernels/backend.hpp"
#include "vchain/quadrature.hpp"

namespace vchain::cli {

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double got, double want, double floor_scale) {
    return std::abs(got - want) / std::max(std::abs(want), floor_scale);
}

// --- deliberately broken flux series (negative-control harness) ---------
//
// Parses the flux cosine as cos(vartheta_{s,k}) instead of
// cos((k - s) vartheta_{s,k}); used only when the negative control is
// requested, to prove the continuity check can fail.
double flux_density_misparsed(const ThetaSolution& sol, double eta, double tau) {
    const auto& ser = sol.series();
    const double A = kPi * (2.0 * sol.mode().mu * eta / sol.params().a + 1.0);
    const double B = kPi * tau / sol.mode().period;
    double acc = 0.0;
    const size_t n = ser.terms();
    for (size_t ik = 0; ik < n; ++ik) {
        for (size_t is = 0; is < n; ++is) {
            const double s1 = ser.kk[is] + ser.kk[ik] + 1.0;
            acc += ser.w[is] * ser.w[ik] * s1 * std::cos(A - B * s1);
        }
    }
    return sol.params().a / (2.0 * sol.mode().mu * sol.mode().period) * acc / sol.norm();
}

}  // namespace

double marginal_density_oracle(double x, double t, const ModeConstants& mode,
                               const PhaseBox& box, int nodes) {
    const Branch br = classify_region(x, t, box);
    if (br.tag == BranchTag::Outside || br.v2 <= br.v1) return 0.0;
    const double a = box.width(0);
    const double adot = box.width(1);
    const GaussLegendre rule(nodes);
    const auto f2 = [&](double v) {
        const double e = x - v * t;
        const double s = std::sin(mode.lambda * e);
        return 2.0 / a * s * s;
    };
    return rule.integrate(f2, br.v1, br.v2) / adot;
}

std::optional<double> marginal_flux_oracle(double x, double t, const ModeConstants& mode,
                                           const PhaseBox& box, int nodes, double floor) {
    const Branch br = classify_region(x, t, box);
    if (br.tag == BranchTag::Outside || br.v2 <= br.v1) return std::nullopt;
    const double a = box.width(0);
    const double adot = box.width(1);
    const GaussLegendre rule(nodes);
    const auto f2 = [&](double v) {
        const double e = x - v * t;
        const double s = std::sin(mode.lambda * e);
        return 2.0 / a * s * s;
    };
    const double den = rule.integrate(f2, br.v1, br.v2) / adot;
    if (den < floor) return std::nullopt;
    const double num =
        rule.integrate([&](double v) { return v * f2(v); }, br.v1, br.v2) / adot;
    return num / den;
}

int count_interior_maxima(const std::vector<double>& values, double prominence_rel) {
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
    const double prom = prominence_rel * peak;
    int peaks = 0;
    for (size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] + prom && values[i] > values[i + 1] + prom) ++peaks;
    }
    return peaks;
}

HalfPeriodFluxProbe probe_half_period_flux(const ThetaSolution& sol, int n_eta, int n_tau) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    const double mask = 1e-2 * 2.0 / a;
    HalfPeriodFluxProbe probe;
    const auto account = [&](double eta, double tau, double u0, double& slot) {
        if (sol.density(eta, tau) < mask) return;
        const auto u = sol.flux(eta, tau);
        if (u) slot = std::max(slot, std::abs(*u + u0));
    };
    for (int j = 0; j < n_tau; ++j) {
        const double tau = T * (j + 0.5) / (2.0 * n_tau);  // first half-period
        for (int i = 1; i + 1 < n_eta; ++i) {
            const double eta = a * i / (n_eta - 1.0);
            if (sol.density(eta, tau) < mask) continue;
            const auto u0 = sol.flux(eta, tau);
            if (!u0) continue;
            account(eta, tau + T / 2.0, *u0, probe.shift_pointwise);
            account(a - eta, tau + T / 2.0, *u0, probe.shift_reflected);
            account(eta, T - tau, *u0, probe.reverse_pointwise);
            account(a - eta, T - tau, *u0, probe.reverse_reflected);
        }
    }
    return probe;
}

namespace {

// ---- individual checks --------------------------------------------------

ResidualReport check_characteristic_conservation(int trajectories) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
        for (int rep = 0; rep < trajectories; ++rep) {
            std::vector<double> d(n);
            for (auto& v : d) v = coord(rng);
            const PhasePoint p0(n, 1, d);
            const double e0 = eta1(p0, 0.0);
            for (int it = 1; it <= 20; ++it) {
                const double t = 5.0 * it / 20.0;
                worst = std::max(worst, std::abs(eta1(propagate(p0, t), t) - e0));
            }
        }
    }
    std::ostringstream g;
    g << "n in {2,3,4}, " << trajectories << " trajectories, t in [0,5] (absolute)";
    return make_report("characteristic-conservation", g.str(), worst, 1e-10);
}

ResidualReport check_taylor_determinant() {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
        for (double t : {-3.0, -1.0, 0.5, 2.0, 5.0}) {
            worst = std::max(worst, std::abs(TaylorPropagator(n, t).determinant() - 1.0));
        }
    }
    return make_report("taylor-determinant", "N_a up to 10 (absolute)", worst, 1e-12);
}

ResidualReport check_stationary_norm(const WellParams& well, int mu) {
    const auto mode = ModeConstants::make(well, mu);
    const double got = integrate_composite(
        [&](double e) { return density_stationary(e, mode, well); }, 0.0, well.a,
        std::max(4, mu), 32);
    return make_report("stationary-norm", "composite GL 32-node (absolute)",
                       std::abs(got - 1.0), 1e-10);
}

ResidualReport check_theta_norm(const ThetaSolution& sol, int n_tau) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    // Density eta-modes are mu |k - s| full periods over [0, a]; midpoint
    // sampling above twice that count integrates them exactly.
    const int m = 2 * sol.mode().mu * (2 * sol.effective_terms() + 2) + 9;
    double worst = 0.0;
    for (int j = 0; j < n_tau; ++j) {
        const double tau = T * j / (n_tau - 1.0);
        const double got = integrate_periodic(
            [&](double e) { return sol.density(e, tau); }, 0.0, a, m);
        worst = std::max(worst, std::abs(got - 1.0));
    }
    std::ostringstream g;
    g << n_tau << " tau samples, midpoint m=" << m << " (absolute)";
    return make_report("theta-norm", g.str(), worst, 1e-10);
}

ResidualReport check_dual_path_density(const ThetaSolution& sol, int n_eta, int n_tau) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    double worst = 0.0;
    for (int j = 0; j < n_tau; ++j) {
        const double tau = T * j / (n_tau - 1.0);
        for (int i = 0; i < n_eta; ++i) {
            const double eta = a * i / (n_eta - 1.0);
            worst = std::max(worst,
                             std::abs(sol.density(eta, tau) - sol.density_from_psi(eta, tau)));
        }
    }
    std::ostringstream g;
    g << n_eta << "x" << n_tau << " (eta,tau) grid (absolute)";
    return make_report("theta-dual-path-density", g.str(), worst, 1e-10);
}

ResidualReport check_periodicity(const ThetaSolution& sol, int n_eta, int n_tau, bool flux) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    // The flux is a ratio; near density nodes the angle roundoff of the
    // sums is amplified by 1/density, so compare it on solid density only.
    const double mask = 1e-2 * 2.0 / a;
    double worst = 0.0;
    for (int j = 0; j < n_tau; ++j) {
        const double tau = T * (j + 0.3) / n_tau;
        for (int i = 1; i + 1 < n_eta; ++i) {
            const double eta = a * i / (n_eta - 1.0);
            if (flux) {
                if (sol.density(eta, tau) < mask) continue;
                const auto u0 = sol.flux(eta, tau);
                const auto u1 = sol.flux(eta, tau + T);
                if (!u0 || !u1) continue;
                worst = std::max(worst, std::abs(*u1 - *u0));
            } else {
                worst = std::max(worst, std::abs(sol.density(eta, tau + T) -
                                                 sol.density(eta, tau)));
            }
        }
    }
    std::ostringstream g;
    g << n_eta << "x" << n_tau << " grid, shift T_mu (absolute)";
    return make_report(flux ? "theta-periodicity-flux" : "theta-periodicity-density", g.str(),
                       worst, 1e-10);
}

ResidualReport check_timeavg_identity(const ThetaSolution& sol, int n_eta) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    // tau-modes reach (K^2 + K) half-turns per period; midpoint sampling
    // above that count integrates the trig polynomial exactly.
    const int K = sol.effective_terms();
    const int m = 2 * (K * K + K) + 17;
    double worst = 0.0;
    for (int i = 1; i < n_eta; ++i) {
        const double eta = a * i / n_eta;
        const double avg = integrate_periodic(
            [&](double tau) { return sol.density(eta, tau); }, 0.0, T, m) / T;
        worst = std::max(worst, std::abs(avg - sol.time_averaged_density(eta)));
    }
    std::ostringstream g;
    g << n_eta << " eta points, midpoint m=" << m << " (absolute)";
    return make_report("theta-timeavg-identity", g.str(), worst, 1e-8);
}

ResidualReport check_quantum_potential(const WellParams& well) {
    const auto coeffs = CoefficientSet::canonical(well);
    double worst = 0.0;
    for (int mu : {1, 2, 3}) {
        const auto mode = ModeConstants::make(well, mu);
        const double wavenumber = std::sqrt(2.0 * well.m * mode.energy) / well.hbar;
        const double amp = std::sqrt(2.0 / well.a);
        ComplexField1D field;
        field.f = [=](double e) {
            return std::complex<double>(amp * std::sin(wavenumber * e), 0.0);
        };
        field.d1 = [=](double e) {
            return std::complex<double>(amp * wavenumber * std::cos(wavenumber * e), 0.0);
        };
        field.d2 = [=](double e) {
            return std::complex<double>(-amp * wavenumber * wavenumber * std::sin(wavenumber * e),
                                        0.0);
        };
        int used = 0;
        for (int i = 1; used < 100 && i < 4096; ++i) {
            const double e = well.a * (i * 0.2481) - well.a * std::floor(i * 0.2481);
            const auto q = quantum_potential(field, coeffs, e, 1e-6 * 2.0 / well.a);
            if (!q) continue;
            ++used;
            worst = std::max(worst, rel_err(*q, mode.energy, mode.energy));
        }
    }
    return make_report("quantum-potential-stationary",
                       "mu in {1,2,3}, 100 off-node points each (relative)", worst, 1e-8);
}

ResidualReport check_flux_oracle_agreement(const ThetaSolution& sol, int n_eta, int n_tau) {
    const auto coeffs = CoefficientSet::canonical(sol.params());
    const double a = sol.params().a;
    const double T = sol.mode().period;
    const double mask = 1e-2 * 2.0 / a;
    double worst = 0.0;
    int used = 0;
    for (int j = 0; j < n_tau; ++j) {
        const double tau = T * (j + 0.37) / n_tau;
        ComplexField1D snap;
        snap.f = [&, tau](double e) { return sol.psi(e, tau); };
        snap.d1 = [&, tau](double e) { return sol.psi_deta(e, tau, 1); };
        for (int i = 1; i + 1 < n_eta; ++i) {
            const double eta = a * i / (n_eta - 1.0);
            if (sol.density(eta, tau) < mask) continue;
            const auto series = sol.flux(eta, tau);
            const auto madelung = flux_from_psi(snap, coeffs, eta);
            if (!series || !madelung) continue;
            ++used;
            worst = std::max(worst, std::abs(*series - *madelung));
        }
    }
    std::ostringstream g;
    g << used << " off-node points (absolute)";
    return make_report("theta-flux-dual-oracle", g.str(), worst, 1e-8);
}

ResidualReport check_marginal_oracle(const ModeConstants& mode, const PhaseBox& box, int nx,
                                     int nt, bool flux) {
    const double a = box.width(0);
    const double adot = box.width(1);
    const double t_max = 2.0 * a / adot;
    double worst = 0.0;
    for (int j = 0; j < nt; ++j) {
        const double t = t_max * (j + 0.5) / nt;
        for (int i = 0; i < nx; ++i) {
            const double x = (adot * t_max + a) * (i + 0.5) / nx;
            if (flux) {
                const double f1 = marginal_density(x, t, mode, box);
                if (f1 * a / 2.0 < 1e-6) continue;
                const auto got = marginal_flux(x, t, mode, box);
                const auto want = marginal_flux_oracle(x, t, mode, box);
                if (!got || !want) continue;
                worst = std::max(worst, rel_err(*got, *want, adot));
            } else {
                const double got = marginal_density(x, t, mode, box);
                const double want = marginal_density_oracle(x, t, mode, box);
                worst = std::max(worst, rel_err(got, want, 1e-6 * 2.0 / a));
            }
        }
    }
    std::ostringstream g;
    g << "mu=" << mode.mu << " " << nx << "x" << nt << " grid (relative)";
    return make_report(flux ? "marginal-flux-oracle" : "marginal-density-oracle", g.str(), worst,
                       1e-8);
}

ResidualReport check_marginal_mass(const ModeConstants& mode, const PhaseBox& box) {
    const double a = box.width(0);
    const double adot = box.width(1);
    double worst = 0.0;
    for (double t : {0.0, 0.1 * a / adot, 0.7 * a / adot, 1.0 * a / adot, 2.3 * a / adot}) {
        const double hi = adot * t + a;
        const double got = integrate_composite(
            [&](double x) { return marginal_density(x, t, mode, box); }, 0.0, hi,
            16 + 4 * mode.mu, 32);
        worst = std::max(worst, std::abs(got - 1.0));
    }
    return make_report("marginal-mass-conservation", "5 time samples, composite GL (absolute)",
                       worst, 1e-8);
}

ResidualReport check_branch_continuity(const ModeConstants& mode, const PhaseBox& box,
                                       int samples) {
    const double a = box.width(0);
    const double adot = box.width(1);
    const double eps = 1e-9;
    std::mt19937_64 rng(0xb0a7);
    std::uniform_real_distribution<double> tdraw(0.05 * a / adot, 2.5 * a / adot);
    double worst = 0.0;
    for (int rep = 0; rep < samples; ++rep) {
        const double t = tdraw(rng);
        // Interior seams of the velocity-limit map at time t.
        for (double xb : {adot * t, a}) {
            if (xb <= eps || xb >= adot * t + a - eps) continue;
            const double fm = marginal_density(xb - eps, t, mode, box);
            const double fp = marginal_density(xb + eps, t, mode, box);
            worst = std::max(worst, std::abs(fp - fm));
            const auto um = marginal_flux(xb - eps, t, mode, box);
            const auto up = marginal_flux(xb + eps, t, mode, box);
            if (um && up && fm * a / 2.0 > 1e-4) {
                worst = std::max(worst, std::abs(*up - *um));
            }
        }
    }
    std::ostringstream g;
    g << samples << " boundary samples, offset 1e-9 (absolute)";
    return make_report("branch-continuity", g.str(), worst, 1e-6);
}

ResidualReport check_branch_coverage(const PhaseBox& box, int samples) {
    const double a = box.width(0);
    const double adot = box.width(1);
    std::mt19937_64 rng(0xc0de);
    std::uniform_real_distribution<double> tdraw(0.0, 3.0 * a / adot);
    int bad = 0;
    for (int rep = 0; rep < samples; ++rep) {
        const double t = tdraw(rng);
        std::uniform_real_distribution<double> xdraw(0.0, adot * t + a);
        const double x = xdraw(rng);
        const Branch br = classify_region(x, t, box);
        if (br.tag == BranchTag::Outside) {
            ++bad;
            continue;
        }
        if (!(br.v1 >= -1e-15 && br.v2 <= adot + 1e-15 && br.v1 <= br.v2 + 1e-15)) ++bad;
    }
    std::ostringstream g;
    g << samples << " random points in the support strip (violations)";
    return make_report("branch-coverage", g.str(), static_cast<double>(bad), 0.0);
}

ResidualReport check_polygon_area(const PhaseBox& box) {
    const double a = box.width(0);
    const double adot = box.width(1);
    double worst = 0.0;
    for (double t : {0.0, 0.3, 1.0, 2.7, 5.0}) {
        // Corners of [0,a] x [0,adot] carried by the order-2 flow.
        const std::array<std::array<double, 2>, 4> c0{{{0, 0}, {a, 0}, {a, adot}, {0, adot}}};
        std::array<std::array<double, 2>, 4> ct;
        for (int i = 0; i < 4; ++i) {
            const PhasePoint p(2, 1, {c0[i][0], c0[i][1]});
            const PhasePoint q = propagate(p, t);
            ct[i] = {q.deriv(0), q.deriv(1)};
        }
        double area2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const auto& p = ct[i];
            const auto& q = ct[(i + 1) % 4];
            area2 += p[0] * q[1] - q[0] * p[1];
        }
        worst = std::max(worst, std::abs(std::abs(area2) / 2.0 - a * adot) / (a * adot));
    }
    return make_report("phase-area-preservation", "corner polygon, 5 times (relative)", worst,
                       1e-12);
}

ResidualReport check_peak_counts(const WellParams& well, double adot) {
    const auto mode = ModeConstants::make(well, 5);
    const PhaseBox box({well.a, adot});
    const double t_max = 2.0 * well.a / adot;
    const int nx = 401;
    int violations = 0;
    int prev = -1;
    for (int j = 0; j < 24; ++j) {
        const double t = t_max * j / 23.0;
        std::vector<double> row(nx);
        for (int i = 0; i < nx; ++i) {
            const double x = (adot * t_max + well.a) * i / (nx - 1.0);
            row[i] = marginal_density(x, t, mode, box);
        }
        const int peaks = count_interior_maxima(row);
        if (j == 0 && peaks != 5) ++violations;
        if (prev >= 0 && peaks > prev) ++violations;
        prev = peaks;
    }
    return make_report("marginal-peak-count", "mu=5, 24 times, 401-point rows (violations)",
                       static_cast<double>(violations), 0.0);
}

// Weight-tail bounds for the frozen limit: everything beyond the four
// leading (s,k) pairs, straight from the truncated weights themselves.
struct FreezeBounds {
    double density = 0.0;
    double flux = 0.0;
};

FreezeBounds freeze_bounds(const ThetaSolution& sol, double min_density) {
    const auto& ser = sol.series();
    const double a = sol.params().a;
    const double v = ser.w2.empty() ? 0.0 : std::sqrt(ser.w2[0]);  // w at k = 0, -1
    // Tail sums over |k| >= 1, formed directly so they never cancel.
    double tail_w = 0.0;
    double tail_w2 = 0.0;
    for (size_t j = 1; j < ser.w2.size(); ++j) {
        tail_w += std::sqrt(ser.w2[j]);
        tail_w2 += ser.w2[j];
    }
    const double s_all = 2.0 * (v + tail_w);
    const double nhat = sol.norm() / a;

    // Double-precision noise of evaluating the sums themselves, at the
    // density scale; the tail bound is meaningless below this floor.
    const double eps = 2.22e-16;
    const double noise_density = 1e3 * eps * s_all * s_all / (a * nhat);

    FreezeBounds b;
    // |F - F_inf| <= (2/a)(Nhat - 2v^2)/Nhat + (S^2 - 4v^2)/(a Nhat) with
    // Nhat - 2v^2 = 2 tail_w2 and S^2 - 4v^2 = 4 tail_w (2v + tail_w).
    b.density = 2.0 / a * (2.0 * tail_w2 / nhat) +
                4.0 * tail_w * (2.0 * v + tail_w) / (a * nhat) + noise_density;
    // Flux numerator pairs (s,k)/(-k-1,-s-1) cancel except for a bounded
    // remainder |cos - cos| <= 2 over representatives with s+k+1 >= 1;
    // diagonal pairs vanish identically.
    double num = 0.0;
    const size_t n = ser.terms();
    for (size_t ik = 0; ik < n; ++ik) {
        for (size_t is = 0; is < n; ++is) {
            const double s1 = ser.kk[is] + ser.kk[ik] + 1.0;
            if (s1 < 0.5 || ser.kk[is] == ser.kk[ik]) continue;
            num += 4.0 * ser.w[is] * ser.w[ik] * s1;
        }
    }
    const double flux_scale = a / (2.0 * sol.mode().mu * sol.mode().period);
    const double den_min = min_density * a * nhat;  // lower bound on the raw density sum
    b.flux = flux_scale * num / den_min +
             1e3 * eps * flux_scale * s_all * s_all / den_min;
    return b;
}

ResidualReport check_beta_freeze_density(const WellParams& well, int mu, double beta) {
    const ThetaSolution sol(well, mu, beta);
    const auto mode = sol.mode();
    double sup = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double tau = mode.period * j / 7.0;
        for (int i = 0; i <= 160; ++i) {
            const double eta = well.a * i / 160.0;
            sup = std::max(sup, std::abs(sol.density(eta, tau) -
                                         density_stationary(eta, mode, well)));
        }
    }
    const double bound = freeze_bounds(sol, 1.0).density;
    std::ostringstream g;
    g << "beta=" << beta << ", sup over 161x8 grid vs tail bound " << bound << " (absolute)";
    return make_report("beta-freeze-density", g.str(), sup, std::min(bound, 1e-5));
}

ResidualReport check_beta_flux_vanishing(const WellParams& well, int mu, double beta) {
    const ThetaSolution sol(well, mu, beta);
    const auto mode = sol.mode();
    const double min_density = 0.1 * 2.0 / well.a;  // mask level for the bound
    double sup = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double tau = mode.period * j / 7.0;
        for (int i = 1; i < 160; ++i) {
            const double eta = well.a * i / 160.0;
            if (sol.density(eta, tau) < min_density) continue;
            const auto u = sol.flux(eta, tau);
            if (u) sup = std::max(sup, std::abs(*u));
        }
    }
    const double bound = freeze_bounds(sol, min_density).flux;
    std::ostringstream g;
    g << "beta=" << beta << ", sup over masked grid vs tail bound " << bound << " (absolute)";
    return make_report("beta-flux-vanishing", g.str(), sup, std::min(bound, 1e-5));
}

ResidualReport check_time_reflection(const ThetaSolution& sol) {
    // Exact symmetry of the comb state: the second half of the period runs
    // the first half backwards, F(eta, T - tau) = F(eta, tau) with the flux
    // reversed pointwise.
    const double a = sol.params().a;
    const double T = sol.mode().period;
    const double mask = 1e-2 * 2.0 / a;
    double worst = 0.0;
    for (int j = 1; j < 12; ++j) {
        const double tau = T * j / 24.0;
        for (int i = 1; i < 40; ++i) {
            const double eta = a * i / 40.0;
            worst = std::max(worst,
                             std::abs(sol.density(eta, T - tau) - sol.density(eta, tau)));
            if (sol.density(eta, tau) < mask) continue;
            const auto u0 = sol.flux(eta, tau);
            const auto u1 = sol.flux(eta, T - tau);
            if (u0 && u1) worst = std::max(worst, std::abs(*u1 + *u0));
        }
    }
    return make_report("theta-time-reflection", "density even, flux odd about T/2 (absolute)",
                       worst, 1e-8);
}

ResidualReport check_theta_boundary(const ThetaSolution& sol) {
    const double a = sol.params().a;
    const double T = sol.mode().period;
    double worst = 0.0;
    for (int j = 0; j < 12; ++j) {
        const double tau = T * j / 11.0;
        worst = std::max({worst, std::abs(sol.psi(0.0, tau)), std::abs(sol.psi(a, tau)),
                          std::abs(sol.density(0.0, tau)), std::abs(sol.density(a, tau))});
    }
    return make_report("theta-boundary-zeros", "eta in {0, a}, 12 tau samples (absolute)", worst,
                       1e-12);
}

}  // namespace

std::vector<ResidualReport> run_verification(const RunConfig& config) {
    config.validate();
    const WellParams well(config.m, config.hbar, config.a);
    const TruncationPolicy trunc{TruncationPolicy::Mode::adaptive, 512, config.trunc_tol};
    const ThetaSolution sol(well, config.mu, config.beta, trunc);
    const auto mode = sol.mode();
    const double T = mode.period;
    const PhaseBox box2({config.a, config.adot});
    const auto coeffs = CoefficientSet::canonical(well);

    std::vector<ResidualReport> out;

    // Characteristic geometry.
    out.push_back(check_characteristic_conservation(200));
    out.push_back(check_taylor_determinant());
    out.push_back(check_polygon_area(box2));

    // Well solutions.
    out.push_back(check_stationary_norm(well, config.mu));
    out.push_back(check_theta_norm(sol, 20));
    out.push_back(check_dual_path_density(sol, 50, 50));
    out.push_back(check_periodicity(sol, 40, 12, /*flux=*/false));
    out.push_back(check_periodicity(sol, 40, 12, /*flux=*/true));
    out.push_back(check_timeavg_identity(sol, 40));
    out.push_back(check_time_reflection(sol));
    out.push_back(check_theta_boundary(sol));
    out.push_back(check_beta_freeze_density(well, config.mu, 10.0));
    out.push_back(check_beta_flux_vanishing(well, config.mu, 10.0));

    // Bridge correspondence.
    out.push_back(check_quantum_potential(well));
    out.push_back(check_flux_oracle_agreement(sol, 64, 8));

    // PDE residuals.  Steps follow the h = 1e-4 scale defaults; the pinned
    // tolerances sit ~30x above the h^2 truncation level of each field.
    {
        const FdSteps h{1e-4 * well.a, 1e-4 * T};
        const Grid2D grid{0.06 * well.a, 0.94 * well.a, 40, 0.1 * T, 0.9 * T, 24};
        const ComplexField2 psi_stat = [&](double e, double tau) {
            return psi_stationary(e, tau, mode, well);
        };
        out.push_back(
            schrodinger_residual(psi_stat, coeffs, grid, h, "schrodinger-stationary", 1e-6));
        const ComplexField2 psi_comb = [&](double e, double tau) { return sol.psi(e, tau); };
        out.push_back(schrodinger_residual(psi_comb, coeffs, grid, h, "schrodinger-theta", 5e-4));

        const RealField2 f_stat = [&](double e, double) {
            return density_stationary(e, mode, well);
        };
        const RealField2 zero = [](double, double) { return 0.0; };
        out.push_back(
            continuity_residual(f_stat, zero, grid, h, "continuity-stationary", 1e-14));

        const RealField2 f_comb = [&](double e, double tau) { return sol.density(e, tau); };
        const bool broken = config.negative_control == "flux-parse";
        const RealField2 fu_comb = [&, broken](double e, double tau) {
            return broken ? flux_density_misparsed(sol, e, tau) : sol.flux_density(e, tau);
        };
        out.push_back(continuity_residual(f_comb, fu_comb, grid, h,
                                          broken ? "continuity-theta(negative-control)"
                                                 : "continuity-theta",
                                          5e-4));

        out.push_back(hamilton_jacobi_residual(psi_stat, coeffs, grid, h, 1e-4 * 2.0 / well.a,
                                               "hamilton-jacobi-stationary", 1e-6));
        out.push_back(hamilton_jacobi_residual(psi_comb, coeffs, grid, h, 1e-1 * 2.0 / well.a,
                                               "hamilton-jacobi-theta", 5e-4));
        out.push_back(equation_of_motion_residual(psi_comb, coeffs, grid, h,
                                                  1e-1 * 2.0 / well.a,
                                                  "equation-of-motion-theta", 5e-4));
    }

    // Order-n transport residuals on small phase grids at early times,
    // where the whole stencil stays inside the support.
    {
        const double a = config.a;
        const double adot = config.adot;
        PhaseGridSpec g2;
        g2.order = 2;
        g2.lo = {0.15 * a, 0.1 * adot};
        g2.hi = {0.85 * a, 0.9 * adot};
        g2.counts = {14, 12};
        g2.steps = {1e-4 * a, 1e-4 * adot};
        g2.times = {0.01 * a / adot, 0.04 * a / adot};
        g2.time_step = 1e-4 * a / adot;

        const PhaseField f2_stat = [&](const PhasePoint& p, double t) {
            return f_n_stationary(p, t, mode, box2);
        };
        const PhaseField zero2 = [](const PhasePoint&, double) { return 0.0; };
        out.push_back(chain_residual(f2_stat, zero2, g2, "chain-n2-stationary", 1e-6));

        const PhaseField f2_comb = [&](const PhasePoint& p, double t) {
            return f_n_theta(p, t, sol, box2);
        };
        const PhaseField fu2_comb = [&](const PhasePoint& p, double t) {
            return f_n_theta_flux_density(p, t, sol, box2);
        };
        out.push_back(chain_residual(f2_comb, fu2_comb, g2, "chain-n2-theta", 1e-4));

        const PhaseBox box3({a, adot, adot * adot / a});
        PhaseGridSpec g3;
        g3.order = 3;
        g3.lo = {0.15 * a, 0.1 * adot, 0.1 * box3.width(2)};
        g3.hi = {0.85 * a, 0.9 * adot, 0.9 * box3.width(2)};
        g3.counts = {10, 8, 8};
        g3.steps = {1e-4 * a, 1e-4 * adot, 1e-4 * box3.width(2)};
        g3.times = {0.01 * a / adot, 0.04 * a / adot};
        g3.time_step = 1e-4 * a / adot;
        const PhaseField f3_stat = [&](const PhasePoint& p, double t) {
            return f_n_stationary(p, t, mode, box3);
        };
        const PhaseField zero3 = [](const PhasePoint&, double) { return 0.0; };
        out.push_back(chain_residual(f3_stat, zero3, g3, "chain-n3-stationary", 1e-6));
    }

    // Exact marginals vs independent quadrature.
    for (int mu : {1, 3, 5}) {
        const auto m = ModeConstants::make(well, mu);
        out.push_back(check_marginal_oracle(m, box2, 48, 24, /*flux=*/false));
        out.push_back(check_marginal_oracle(m, box2, 48, 24, /*flux=*/true));
    }
    out.push_back(check_marginal_mass(ModeConstants::make(well, 5), box2));
    out.push_back(check_branch_continuity(ModeConstants::make(well, 5), box2, 300));
    out.push_back(check_branch_coverage(box2, 20000));
    out.push_back(check_peak_counts(well, config.adot));

    return out;
}

std::string reports_to_json(const std::vector<ResidualReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"name", r.name},
                       {"grid", r.grid},
                       {"max_abs", r.max_abs},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    }
    return arr.dump(2) + "\n";
}

bool all_pass(const std::vector<ResidualReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass) return false;
    }
    return true;
}

}  // namespace vchain::cli
