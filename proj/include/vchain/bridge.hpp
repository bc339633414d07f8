#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vchain/phase_point.hpp"
#include "vchain/well.hpp"

namespace vchain {

/// Constants of the Helmholtz/Madelung correspondence.  The canonical set
/// alpha = -hbar/2m, beta = 1/hbar, gamma = -q/m satisfies -2 alpha beta = 1/m.
struct CoefficientSet {
    double alpha = 0.0;
    double betac = 0.0;
    double gamma = 0.0;

    CoefficientSet(double alpha_, double betac_, double gamma_);
    static CoefficientSet canonical(const WellParams& params, double charge = 0.0);
};

/// Snapshot of a complex field on [0, a]; analytic derivative evaluators
/// are used when set, central differences with fd_step otherwise.
struct ComplexField1D {
    std::function<std::complex<double>(double)> f;
    std::function<std::complex<double>(double)> d1;
    std::function<std::complex<double>(double)> d2;
    double fd_step = 1e-4;
};

/// Named residual check outcome; pass <=> max_abs <= tolerance.
struct ResidualReport {
    std::string name;
    std::string grid;
    double max_abs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

ResidualReport make_report(std::string name, std::string grid, double max_abs, double tolerance);

/// Mean flux -2 alpha d(arg psi)/d eta = (canonically) hbar/m Im(psi* psi') / |psi|^2.
/// Undefined at density nodes (|psi|^2 below `floor`).
std::optional<double> flux_from_psi(const ComplexField1D& psi, const CoefficientSet& coeffs,
                                    double eta, double floor = 1e-12);

/// Quantum potential alpha |psi|'' / (beta |psi|).
std::optional<double> quantum_potential(const ComplexField1D& psi, const CoefficientSet& coeffs,
                                        double eta, double floor = 1e-12);

/// Uniform rectangular evaluation grid in (eta, tau) or (x, t).
struct Grid2D {
    double x0 = 0.0, x1 = 1.0;
    int nx = 2;
    double t0 = 0.0, t1 = 1.0;
    int nt = 2;

    double x(int i) const { return x0 + (x1 - x0) * i / (nx - 1); }
    double t(int j) const { return t0 + (t1 - t0) * j / (nt - 1); }
    std::string describe() const;
};

struct FdSteps {
    double h_eta = 1e-4;
    double h_tau = 1e-4;
};

using ComplexField2 = std::function<std::complex<double>(double, double)>;
using RealField2 = std::function<double(double, double)>;

/// Free-equation residual i d_tau psi - alpha d^2_eta psi, max over the
/// grid relative to the larger of the two term magnitudes.
ResidualReport schrodinger_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                    const Grid2D& grid, const FdSteps& h, std::string name,
                                    double tolerance);

/// Continuity residual d_tau F + d_eta (F u), with the product field
/// supplied directly so density nodes stay harmless.
ResidualReport continuity_residual(const RealField2& density, const RealField2& flux_density,
                                   const Grid2D& grid, const FdSteps& h, std::string name,
                                   double tolerance);

/// Same check from a plain flux field; the product is formed pointwise and
/// every stencil point must have a defined flux.
ResidualReport continuity_residual_from_flux(
    const RealField2& density, const std::function<std::optional<double>(double, double)>& flux,
    const Grid2D& grid, const FdSteps& h, std::string name, double tolerance);

/// Phase-space grid for the order-n transport residual.
struct PhaseGridSpec {
    int order = 2;
    std::vector<double> lo;      // per derivative level, size order
    std::vector<double> hi;
    std::vector<int> counts;
    std::vector<double> steps;   // FD step per level
    std::vector<double> times;
    double time_step = 1e-4;
    std::string describe() const;
};

using PhaseField = std::function<double(const PhasePoint&, double)>;

/// Residual of the order-n transport equation
///   d_t f + sum_{k=0}^{n-2} r^(k+1) d_{r^(k)} f + d_{r^(n-1)} (f <u>) = 0
/// with the flux term supplied as the product field fu.
ResidualReport chain_residual(const PhaseField& f, const PhaseField& fu,
                              const PhaseGridSpec& grid, std::string name, double tolerance);

/// Hamilton-Jacobi analog residual -(1/beta) d_tau phi + |u|^2/(4 alpha beta) - Q
/// (zero potential inside the well), all derivatives by central differences;
/// phase differences are taken as arg of wavefunction ratios.
ResidualReport hamilton_jacobi_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                        const Grid2D& grid, const FdSteps& h, double mask_floor,
                                        std::string name, double tolerance);

/// Gradient form of the equation of motion along the flow:
/// d_tau u + u d_eta u - 2 alpha beta d_eta Q, canonically + (1/m) d_eta Q.
ResidualReport equation_of_motion_residual(const ComplexField2& psi, const CoefficientSet& coeffs,
                                           const Grid2D& grid, const FdSteps& h, double mask_floor,
                                           std::string name, double tolerance);

/// In-place 1-D phase unwrap: corrects jumps larger than pi by +-2 pi.
void unwrap_phase(std::vector<double>& phase);

}  // namespace vchain
