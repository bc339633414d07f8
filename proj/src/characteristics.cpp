#include "vchain/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace vchain {

double tau(int k, double t) {
    if (k < 0) throw std::invalid_argument("tau: k must be non-negative");
    // t^k / k! as a running product; long double keeps the intermediate
    // rounding below 1 ulp of the double result for k <= 20.
    long double acc = 1.0L;
    for (int i = 1; i <= k; ++i) acc *= static_cast<long double>(t) / i;
    const double mag = static_cast<double>(acc);
    return (k % 2 == 0) ? -mag : mag;
}

std::array<double, 3> eta(const PhasePoint& p, double t) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    long double coeff = 1.0L;  // (-1)^k t^k / k!
    for (int k = 0; k < p.order; ++k) {
        if (k > 0) coeff *= -static_cast<long double>(t) / k;
        const double c = static_cast<double>(coeff);
        for (int axis = 0; axis < p.dimension; ++axis) {
            out[axis] += c * p.deriv(k, axis);
        }
    }
    return out;
}

double eta1(const PhasePoint& p, double t) {
    if (p.dimension != 1) throw std::invalid_argument("eta1: point must be 1-D");
    return eta(p, t)[0];
}

TauWeights hyperplane_normal(int order, double t) {
    if (order < 1) throw std::invalid_argument("hyperplane_normal: order must be >= 1");
    TauWeights w;
    w.order = order;
    w.time = t;
    w.weights.resize(order);
    for (int k = 0; k < order; ++k) w.weights[k] = tau(k, t);
    return w;
}

TaylorPropagator::TaylorPropagator(int size, double time) : size_(size), time_(time) {
    if (size < 1 || size > 32) {
        throw std::invalid_argument("TaylorPropagator: size must be in [1, 32]");
    }
    powers_.resize(size);
    long double acc = 1.0L;
    powers_[0] = 1.0;
    for (int k = 1; k < size; ++k) {
        acc *= static_cast<long double>(time) / k;
        powers_[k] = static_cast<double>(acc);
    }
}

double TaylorPropagator::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= size_ || j >= size_) {
        throw std::out_of_range("TaylorPropagator::entry");
    }
    return (j < i) ? 0.0 : powers_[j - i];
}

void TaylorPropagator::apply(std::span<double> x) const {
    if (static_cast<int>(x.size()) != size_) {
        throw std::invalid_argument("TaylorPropagator::apply: size mismatch");
    }
    // Upper-triangular: row i only reads entries j >= i, so in-place is safe.
    for (int i = 0; i < size_; ++i) {
        double acc = 0.0;
        for (int j = i; j < size_; ++j) acc += powers_[j - i] * x[j];
        x[i] = acc;
    }
}

double TaylorPropagator::determinant() const {
    // Generic elimination on a dense copy; the triangular structure is the
    // claim under test, not an input assumption.
    const int n = size_;
    std::vector<double> m(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[static_cast<size_t>(i) * n + j] = entry(i, j);
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(m[static_cast<size_t>(r) * n + c]) >
                std::abs(m[static_cast<size_t>(pivot) * n + c]))
                pivot = r;
        }
        if (pivot != c) {
            for (int j = 0; j < n; ++j)
                std::swap(m[static_cast<size_t>(pivot) * n + j], m[static_cast<size_t>(c) * n + j]);
            det = -det;
        }
        const double p = m[static_cast<size_t>(c) * n + c];
        if (p == 0.0) return 0.0;
        det *= p;
        for (int r = c + 1; r < n; ++r) {
            const double f = m[static_cast<size_t>(r) * n + c] / p;
            for (int j = c; j < n; ++j)
                m[static_cast<size_t>(r) * n + j] -= f * m[static_cast<size_t>(c) * n + j];
        }
    }
    return det;
}

PhasePoint propagate(const PhasePoint& p, double t) {
    const TaylorPropagator m(p.order, t);
    PhasePoint out = p;
    std::vector<double> axis_vals(p.order);
    for (int axis = 0; axis < p.dimension; ++axis) {
        for (int k = 0; k < p.order; ++k) axis_vals[k] = p.deriv(k, axis);
        m.apply(axis_vals);
        for (int k = 0; k < p.order; ++k) out.deriv(k, axis) = axis_vals[k];
    }
    return out;
}

}  // namespace vchain
