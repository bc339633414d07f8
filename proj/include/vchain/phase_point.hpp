#pragma once

#include <stdexcept>
#include <vector>

namespace vchain {

/// A point of the order-n phase space: the coordinate and its time
/// derivatives up to order n-1, per spatial axis.  Stored k-major, so
/// derivs[k*dimension + axis] holds r^(k) along `axis`.
struct PhasePoint {
    static constexpr int kMaxOrder = 20;

    int order = 1;
    int dimension = 1;
    std::vector<double> derivs;

    PhasePoint(int order_, int dimension_, std::vector<double> derivs_)
        : order(order_), dimension(dimension_), derivs(std::move(derivs_)) {
        if (order < 1 || order > kMaxOrder) {
            throw std::invalid_argument("PhasePoint: order must be in [1, 20]");
        }
        if (dimension != 1 && dimension != 3) {
            throw std::invalid_argument("PhasePoint: dimension must be 1 or 3");
        }
        if (derivs.size() != static_cast<size_t>(order) * dimension) {
            throw std::invalid_argument("PhasePoint: derivs must have order*dimension entries");
        }
    }

    /// 1-D convenience: order is the number of entries.
    static PhasePoint line(std::vector<double> derivs_) {
        const int n = static_cast<int>(derivs_.size());
        return PhasePoint(n, 1, std::move(derivs_));
    }

    double deriv(int k, int axis = 0) const {
        return derivs[static_cast<size_t>(k) * dimension + axis];
    }
    double& deriv(int k, int axis = 0) {
        return derivs[static_cast<size_t>(k) * dimension + axis];
    }
};

/// Components tau_0..tau_{n-1} of the normal vector to the characteristic
/// hyperplane at time t, tau_k = (-1)^{k+1} t^k / k!.
struct TauWeights {
    int order = 1;
    double time = 0.0;
    std::vector<double> weights;
};

}  // namespace vchain
