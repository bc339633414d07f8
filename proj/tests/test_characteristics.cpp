#include <doctest.h>

#include <cmath>
#include <random>

#include "vchain/characteristics.hpp"

using namespace vchain;

TEST_CASE("tau weights") {
    CHECK(tau(0, 5.0) == doctest::Approx(-1.0));
    CHECK(tau(1, 2.0) == doctest::Approx(2.0));
    CHECK(tau(2, 2.0) == doctest::Approx(-2.0));
    CHECK(tau(0, -17.3) == -1.0);

    // tau(k, t) k! (-1)^{k+1} = t^k
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> draw(-3.0, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double t = draw(rng);
        double fact = 1.0;
        for (int k = 0; k <= 12; ++k) {
            if (k > 0) fact *= k;
            const double lhs = tau(k, t) * fact * ((k % 2 == 0) ? -1.0 : 1.0);
            CHECK(lhs == doctest::Approx(std::pow(t, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("eta examples") {
    CHECK(eta1(PhasePoint::line({1.0, 0.5}), 2.0) == doctest::Approx(0.0));
    CHECK(eta1(PhasePoint::line({1.0, 1.0, 1.0}), 1.0) == doctest::Approx(0.5));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> draw(-2.0, 2.0);
    for (int n = 1; n <= 6; ++n) {
        std::vector<double> d(n);
        for (auto& v : d) v = draw(rng);
        const PhasePoint p(n, 1, d);
        CHECK(eta1(p, 0.0) == p.deriv(0));
    }
}

TEST_CASE("eta is axis-separable in 3-D") {
    const PhasePoint p(2, 3, {1.0, 2.0, 3.0, 0.5, -0.5, 0.25});
    const auto e = eta(p, 2.0);
    CHECK(e[0] == doctest::Approx(1.0 - 2.0 * 0.5));
    CHECK(e[1] == doctest::Approx(2.0 + 2.0 * 0.5));
    CHECK(e[2] == doctest::Approx(3.0 - 2.0 * 0.25));
}

TEST_CASE("hyperplane normals") {
    const auto w2 = hyperplane_normal(2, 1.0);
    CHECK(w2.weights[0] == doctest::Approx(-1.0));
    CHECK(w2.weights[1] == doctest::Approx(1.0));

    const auto w3 = hyperplane_normal(3, 2.0);
    CHECK(w3.weights[0] == doctest::Approx(-1.0));
    CHECK(w3.weights[1] == doctest::Approx(2.0));
    CHECK(w3.weights[2] == doctest::Approx(-2.0));

    CHECK(hyperplane_normal(1, 123.0).weights[0] == doctest::Approx(-1.0));

    // Coplanarity: the normal depends on (order, t) only.
    const auto wa = hyperplane_normal(4, 0.7);
    const auto wb = hyperplane_normal(4, 0.7);
    for (int k = 0; k < 4; ++k) CHECK(wa.weights[k] == wb.weights[k]);
}

TEST_CASE("propagate basics") {
    const PhasePoint moved = propagate(PhasePoint::line({0.0, 1.0}), 3.0);
    CHECK(moved.deriv(0) == doctest::Approx(3.0));
    CHECK(moved.deriv(1) == doctest::Approx(1.0));

    const PhasePoint p(3, 1, {0.3, -0.7, 1.1});
    const PhasePoint same = propagate(p, 0.0);
    for (int k = 0; k < 3; ++k) CHECK(same.deriv(k) == p.deriv(k));
}

TEST_CASE("propagate composes as a one-parameter group") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> draw(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> d(4);
        for (auto& v : d) v = draw(rng);
        const PhasePoint p(4, 1, d);
        const double t1 = 3.0 * draw(rng);
        const double t2 = 3.0 * draw(rng);
        const PhasePoint two_step = propagate(propagate(p, t1), t2);
        const PhasePoint one_step = propagate(p, t1 + t2);
        for (int k = 0; k < 4; ++k) {
            CHECK(two_step.deriv(k) == doctest::Approx(one_step.deriv(k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("taylor matrix determinant and group law") {
    for (int n = 1; n <= 10; ++n) {
        CHECK(TaylorPropagator(n, 1.7).determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const TaylorPropagator m1(5, 0.4);
    const TaylorPropagator m2(5, 1.3);
    const TaylorPropagator m12(5, 1.7);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 5; ++k) acc += m1.entry(i, k) * m2.entry(k, j);
            CHECK(acc == doctest::Approx(m12.entry(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("characteristic conservation along truncated trajectories") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> draw(-1.0, 1.0);
    for (int n : {2, 3, 4}) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> d(n);
            for (auto& v : d) v = draw(rng);
            const PhasePoint p(n, 1, d);
            const double e0 = eta1(p, 0.0);
            for (double t : {0.3, 1.0, 2.5, 5.0}) {
                const double et = eta1(propagate(p, t), t);
                CHECK(std::abs(et - e0) < 1e-12 * std::max(1.0, std::abs(e0)) + 1e-13);
            }
        }
    }
}

TEST_CASE("phase point validation") {
    CHECK_THROWS(PhasePoint(0, 1, {}));
    CHECK_THROWS(PhasePoint(21, 1, std::vector<double>(21, 0.0)));
    CHECK_THROWS(PhasePoint(2, 2, {0.0, 0.0, 0.0, 0.0}));
    CHECK_THROWS(PhasePoint(2, 1, {0.0}));
    CHECK_THROWS(tau(-1, 0.0));
}
