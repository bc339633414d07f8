#pragma once

#include <functional>
#include <vector>

namespace vchain {

/// Gauss-Legendre rule on [-1, 1]; nodes to machine precision via Newton
/// iteration on the Legendre polynomial.
struct GaussLegendre {
    explicit GaussLegendre(int n);
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f, double a, double b) const;
};

/// Composite Gauss-Legendre over `panels` equal sub-intervals.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int nodes_per_panel);

/// Midpoint rule with m uniform samples; for a T-periodic integrand over a
/// full period this is exact for every Fourier mode of index below m.
double integrate_periodic(const std::function<double(double)>& f, double a, double b, int m);

}  // namespace vchain
