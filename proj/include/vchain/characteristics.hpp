#pragma once

#include <array>
#include <span>

#include "vchain/phase_point.hpp"

namespace vchain {

/// tau_k(t) = (-1)^{k+1} t^k / k!.  tau(0, t) = -1 for every t.
double tau(int k, double t);

/// Characteristic coordinate eta_n = -sum_k tau_k(t) r^(k)
///                                 = sum_k (-1)^k t^k/k! r^(k), per axis.
/// The transform is axis-separable; entries beyond p.dimension are zero.
std::array<double, 3> eta(const PhasePoint& p, double t);

/// eta for a 1-D point.
double eta1(const PhasePoint& p, double t);

/// Normal vector (tau_0(t), ..., tau_{n-1}(t)) shared by every
/// characteristic hyperplane at time t; level hyperplanes are coplanar.
TauWeights hyperplane_normal(int order, double t);

/// Upper-triangular Taylor propagation matrix with entries t^{j-i}/(j-i)!.
/// Unit diagonal, determinant 1, and M(t1) M(t2) = M(t1 + t2).
class TaylorPropagator {
  public:
    TaylorPropagator(int size, double time);

    int size() const { return size_; }
    double time() const { return time_; }
    double entry(int i, int j) const;

    /// In-place x <- M x for one axis (x has size() entries).
    void apply(std::span<double> x) const;

    double determinant() const;

  private:
    int size_;
    double time_;
    std::vector<double> powers_;  // t^k / k!, k = 0..size-1
};

/// Phase trajectory xi(t) = M_n(t) xi_0 truncated at p.order: derivatives
/// of order >= n are held at zero, the unique truncation under which
/// eta_n is conserved along the trajectory.
PhasePoint propagate(const PhasePoint& p, double t);

}  // namespace vchain
