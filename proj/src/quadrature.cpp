#include "vchain/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vchain {

GaussLegendre::GaussLegendre(int n) {
    if (n < 1 || n > 256) throw std::invalid_argument("GaussLegendre: n must be in [1, 256]");
    nodes.resize(n);
    weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mid + hw * nodes[i]);
    return acc * hw;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int nodes_per_panel) {
    if (panels < 1) throw std::invalid_argument("integrate_composite: panels must be >= 1");
    const GaussLegendre rule(nodes_per_panel);
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        acc += rule.integrate(f, a + p * h, a + (p + 1) * h);
    }
    return acc;
}

double integrate_periodic(const std::function<double(double)>& f, double a, double b, int m) {
    if (m < 1) throw std::invalid_argument("integrate_periodic: m must be >= 1");
    const double h = (b - a) / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

}  // namespace vchain
