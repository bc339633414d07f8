#include "vchain/bridge.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vchain {

namespace {
constexpr double kPi = std::numbers::pi;

std::complex<double> central_d1(const ComplexField1D& field, double eta) {
    const double h = field.fd_step;
    return (field.f(eta + h) - field.f(eta - h)) / (2.0 * h);
}

double phase_diff(const std::complex<double>& num, const std::complex<double>& den) {
    // arg of the ratio; well-defined for |increment| < pi without unwrapping.
    return std::arg(num / den);
}

struct ScaledMax {
    double residual = 0.0;
    double scale = 0.0;

    void add(double r, double s) {
        residual = std::max(residual, std::abs(r));
        scale = std::max(scale, std::abs(s));
    }
    double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

}  // namespace

CoefficientSet::CoefficientSet(double alpha_, double betac_, double gamma_)
    : alpha(alpha_), betac(betac_), gamma(gamma_) {
    if (betac == 0.0) throw std::invalid_argument("CoefficientSet: betac must be non-zero");
}

CoefficientSet CoefficientSet::canonical(const WellParams& params, double charge) {
    CoefficientSet c(-params.hbar / (2.0 * params.m), 1.0 / params.hbar, -charge / params.m);
    if (std::abs(-2.0 * c.alpha * c.betac - 1.0 / params.m) > 1e-12 / params.m) {
        throw std::logic_error("CoefficientSet: canonical identity -2 alpha beta = 1/m failed");
    }
    return c;
}

ResidualReport make_report(std::string name, std::string grid, double max_abs, double tolerance) {
    ResidualReport r;
    r.name = std::move(name);
    r.grid = std::move(grid);
    r.max_abs = max_abs;
    r.tolerance = tolerance;
    r.pass = max_abs <= tolerance;
    return r;
}

std::optional<double> flux_from_psi(const ComplexField1D& psi, const CoefficientSet& coeffs,
                                    double eta, double floor) {
    const std::complex<double> v = psi.f(eta);
    const double n2 = std::norm(v);
    if (n2 < floor) return std::nullopt;
    const std::complex<double> dv = psi.d1 ? psi.d1(eta) : central_d1(psi, eta);
    return -2.0 * coeffs.alpha * std::imag(std::conj(v) * dv) / n2;
}

std::optional<double> quantum_potential(const ComplexField1D& psi, const CoefficientSet& coeffs,
                                        double eta, double floor) {
    const std::complex<double> v = psi.f(eta);
    const double n2 = std::norm(v);
    if (n2 < floor) return std::nullopt;
    const double r = std::sqrt(n2);
    double d2r = 0.0;
    if (psi.d1 && psi.d2) {
        const std::complex<double> dv = psi.d1(eta);
        const std::complex<double> ddv = psi.d2(eta);
        const double dr = std::real(std::conj(v) * dv) / r;
        d2r = (std::norm(dv) + std::real(std::conj(v) * ddv) - dr * dr) / r;
    } else {
        const double h = psi.fd_step;
        d2r = (std::abs(psi.f(eta + h)) - 2.0 * r + std::abs(psi.f(eta - h))) / (h * h);
    }
    return coeffs.alpha * d2r / (coeffs.betac * r);
}

std::string Grid2D::describe() const {
    std::ostringstream os;
    os << "[" << x0 << "," << x1 << "]x" << nx << " [" << t0 << "," << t1 << "]x" << nt;
    return os.str();
}

std::string PhaseGridSpec::describe() const {
    std::ostringstream os;
    os << "order=" << order << " counts=";
    for (size_t i = 0; i < counts.size(); ++i) os << (i ? "x" : "") << counts[i];
    os << " times=" << times.size();
    return os.str();
}

ResidualReport schrodinger_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                    const Grid2D& grid, const FdSteps& h, std::string name,
                                    double tolerance) {
    ScaledMax acc;
    const std::complex<double> iu(0.0, 1.0);
    for (int j = 0; j < grid.nt; ++j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const std::complex<double> dt =
                (psi(x, t + h.h_tau) - psi(x, t - h.h_tau)) / (2.0 * h.h_tau);
            const std::complex<double> dxx =
                (psi(x + h.h_eta, t) - 2.0 * psi(x, t) + psi(x - h.h_eta, t)) /
                (h.h_eta * h.h_eta);
            const std::complex<double> lhs = iu * dt;
            const std::complex<double> rhs = coeffs.alpha * dxx;
            acc.add(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
        }
    }
    std::ostringstream g;
    g << grid.describe() << " h_eta=" << h.h_eta << " h_tau=" << h.h_tau << " (relative)";
    return make_report(std::move(name), g.str(), acc.relative(), tolerance);
}

ResidualReport continuity_residual(const RealField2& density, const RealField2& flux_density,
                                   const Grid2D& grid, const FdSteps& h, std::string name,
                                   double tolerance) {
    ScaledMax acc;
    for (int j = 0; j < grid.nt; ++j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double dt = (density(x, t + h.h_tau) - density(x, t - h.h_tau)) / (2.0 * h.h_tau);
            const double dx =
                (flux_density(x + h.h_eta, t) - flux_density(x - h.h_eta, t)) / (2.0 * h.h_eta);
            acc.add(dt + dx, std::max(std::abs(dt), std::abs(dx)));
        }
    }
    std::ostringstream g;
    g << grid.describe() << " h_eta=" << h.h_eta << " h_tau=" << h.h_tau << " (relative)";
    return make_report(std::move(name), g.str(), acc.relative(), tolerance);
}

ResidualReport continuity_residual_from_flux(
    const RealField2& density, const std::function<std::optional<double>(double, double)>& flux,
    const Grid2D& grid, const FdSteps& h, std::string name, double tolerance) {
    const RealField2 fu = [&](double x, double t) {
        const auto u = flux(x, t);
        if (!u) throw std::domain_error("continuity_residual_from_flux: flux undefined on grid");
        return density(x, t) * *u;
    };
    return continuity_residual(density, fu, grid, h, std::move(name), tolerance);
}

ResidualReport chain_residual(const PhaseField& f, const PhaseField& fu,
                              const PhaseGridSpec& grid, std::string name, double tolerance) {
    const int n = grid.order;
    if (static_cast<int>(grid.lo.size()) != n || static_cast<int>(grid.hi.size()) != n ||
        static_cast<int>(grid.counts.size()) != n || static_cast<int>(grid.steps.size()) != n) {
        throw std::invalid_argument("chain_residual: grid arrays must match order");
    }

    // Iterate the product grid with a simple odometer.
    std::vector<int> idx(n, 0);
    std::vector<double> coords(n);
    ScaledMax acc;
    for (double t : grid.times) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (int d = 0; d < n; ++d) {
                coords[d] = grid.counts[d] == 1
                                ? grid.lo[d]
                                : grid.lo[d] + (grid.hi[d] - grid.lo[d]) * idx[d] /
                                      (grid.counts[d] - 1);
            }
            PhasePoint p(n, 1, coords);

            const double ht = grid.time_step;
            double residual = (f(p, t + ht) - f(p, t - ht)) / (2.0 * ht);
            double scale = std::abs(residual);

            // Drift terms r^(k+1) d_{r^(k)} f for k = 0..n-2.
            for (int k = 0; k + 1 < n; ++k) {
                const double hk = grid.steps[k];
                PhasePoint pp = p;
                pp.deriv(k) = coords[k] + hk;
                const double fp = f(pp, t);
                pp.deriv(k) = coords[k] - hk;
                const double fm = f(pp, t);
                const double term = coords[k + 1] * (fp - fm) / (2.0 * hk);
                residual += term;
                scale = std::max(scale, std::abs(term));
            }

            // Flux divergence in the top derivative variable.
            {
                const int k = n - 1;
                const double hk = grid.steps[k];
                PhasePoint pp = p;
                pp.deriv(k) = coords[k] + hk;
                const double gp = fu(pp, t);
                pp.deriv(k) = coords[k] - hk;
                const double gm = fu(pp, t);
                const double term = (gp - gm) / (2.0 * hk);
                residual += term;
                scale = std::max(scale, std::abs(term));
            }

            acc.add(residual, scale);

            int d = 0;
            while (d < n && ++idx[d] == grid.counts[d]) {
                idx[d] = 0;
                ++d;
            }
            if (d == n) break;
        }
    }
    return make_report(std::move(name), grid.describe() + " (relative)", acc.relative(),
                       tolerance);
}

ResidualReport hamilton_jacobi_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                        const Grid2D& grid, const FdSteps& h, double mask_floor,
                                        std::string name, double tolerance) {
    ScaledMax acc;
    int used = 0;
    for (int j = 0; j < grid.nt; ++j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const std::complex<double> v = psi(x, t);
            if (std::norm(v) < mask_floor) continue;
            ++used;

            const double dphi_dt = phase_diff(psi(x, t + h.h_tau), psi(x, t - h.h_tau)) /
                                   (2.0 * h.h_tau);
            const double dphi_dx = phase_diff(psi(x + h.h_eta, t), psi(x - h.h_eta, t)) /
                                   (2.0 * h.h_eta);
            const double u = -2.0 * coeffs.alpha * dphi_dx;

            const double r0 = std::abs(v);
            const double d2r = (std::abs(psi(x + h.h_eta, t)) - 2.0 * r0 +
                                std::abs(psi(x - h.h_eta, t))) /
                               (h.h_eta * h.h_eta);
            const double q = coeffs.alpha * d2r / (coeffs.betac * r0);

            const double lhs = -dphi_dt / coeffs.betac;
            const double kin = u * u / (4.0 * coeffs.alpha * coeffs.betac);
            const double residual = lhs + kin - q;
            const double scale =
                std::max({std::abs(lhs), std::abs(kin), std::abs(q)});
            acc.add(residual, scale);
        }
    }
    std::ostringstream g;
    g << grid.describe() << " h_eta=" << h.h_eta << " h_tau=" << h.h_tau << " points=" << used
      << " (relative)";
    return make_report(std::move(name), g.str(), acc.relative(), tolerance);
}

ResidualReport equation_of_motion_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                           const Grid2D& grid, const FdSteps& h, double mask_floor,
                                           std::string name, double tolerance) {
    const auto u_at = [&](double x, double t) {
        const double dphi_dx =
            phase_diff(psi(x + h.h_eta, t), psi(x - h.h_eta, t)) / (2.0 * h.h_eta);
        return -2.0 * coeffs.alpha * dphi_dx;
    };
    const auto q_at = [&](double x, double t) {
        const double r0 = std::abs(psi(x, t));
        const double d2r =
            (std::abs(psi(x + h.h_eta, t)) - 2.0 * r0 + std::abs(psi(x - h.h_eta, t))) /
            (h.h_eta * h.h_eta);
        return coeffs.alpha * d2r / (coeffs.betac * r0);
    };

    ScaledMax acc;
    int used = 0;
    for (int j = 0; j < grid.nt; ++j) {
        const double t = grid.t(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            // The stencil reaches h_eta twice in eta; mask on the widest use.
            bool ok = true;
            for (double xx : {x - 2.0 * h.h_eta, x - h.h_eta, x, x + h.h_eta, x + 2.0 * h.h_eta}) {
                if (std::norm(psi(xx, t)) < mask_floor) ok = false;
            }
            if (!ok) continue;
            ++used;

            const double du_dt = (u_at(x, t + h.h_tau) - u_at(x, t - h.h_tau)) / (2.0 * h.h_tau);
            const double du_dx = (u_at(x + h.h_eta, t) - u_at(x - h.h_eta, t)) / (2.0 * h.h_eta);
            const double dq_dx = (q_at(x + h.h_eta, t) - q_at(x - h.h_eta, t)) / (2.0 * h.h_eta);
            const double u = u_at(x, t);

            const double residual = du_dt + u * du_dx - 2.0 * coeffs.alpha * coeffs.betac * dq_dx;
            const double scale = std::max({std::abs(du_dt), std::abs(u * du_dx),
                                           std::abs(2.0 * coeffs.alpha * coeffs.betac * dq_dx)});
            acc.add(residual, scale);
        }
    }
    std::ostringstream g;
    g << grid.describe() << " points=" << used << " (relative)";
    return make_report(std::move(name), g.str(), acc.relative(), tolerance);
}

void unwrap_phase(std::vector<double>& phase) {
    for (size_t i = 1; i < phase.size(); ++i) {
        double d = phase[i] - phase[i - 1];
        while (d > kPi) {
            phase[i] -= 2.0 * kPi;
            d = phase[i] - phase[i - 1];
        }
        while (d < -kPi) {
            phase[i] += 2.0 * kPi;
            d = phase[i] - phase[i - 1];
        }
    }
}

}  // namespace vchain
