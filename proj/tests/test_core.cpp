#include <cmath>
#include <random>

#include "doctest.h"

#include "ebmod/core.hpp"

using namespace ebmod;

namespace {

PointSet two_grad_set() {
    return PointSet(std::vector<Vector>{{0.5, 0.5}, {1.0, 1.0}});
}

std::vector<Vector> random_points(std::mt19937& rng, std::size_t n,
                                  std::size_t count) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<Vector> pts(count, Vector(n));
    for (auto& p : pts)
        for (auto& c : p) c = u(rng);
    return pts;
}

}  // namespace

TEST_CASE("support value and argmax") {
    const PointSet A = two_grad_set();
    auto r = support(A, {1.0, 1.0});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(r.argmax_indices.size() == 1);
    CHECK(A[r.argmax_indices[0]] == Vector{1.0, 1.0});

    r = support(A, {0.0, 0.0});
    CHECK(r.value == 0.0);
    CHECK(r.argmax_indices.size() == A.size());

    r = support(A, {-1.0, -1.0});
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-12));
    REQUIRE(r.argmax_indices.size() == 1);
    CHECK(A[r.argmax_indices[0]] == Vector{0.5, 0.5});
}

TEST_CASE("support rejects dimension mismatch") {
    CHECK_THROWS_AS(support(two_grad_set(), {1.0}), InputError);
}

TEST_CASE("augment_with_origin") {
    const PointSet a = augment_with_origin(PointSet(std::vector<Vector>{{1, 1}}));
    CHECK(a.size() == 2);
    CHECK(a[1] == Vector{0.0, 0.0});

    const PointSet b =
        augment_with_origin(PointSet(std::vector<Vector>{{0, 0}, {2, 0}}));
    CHECK(b.size() == 2);

    const PointSet c = augment_with_origin(two_grad_set());
    CHECK(c.size() == 3);
}

TEST_CASE("PointSet dedups exact duplicates and keeps labels aligned") {
    const PointSet A(std::vector<Vector>{{1, 2}, {1, 2}, {3, 4}},
                     {"p", "p-dup", "q"});
    CHECK(A.size() == 2);
    CHECK(A.labels()[1] == "q");
}

TEST_CASE("PointSet rejects bad input") {
    CHECK_THROWS_AS(PointSet(std::vector<Vector>{}), InputError);
    CHECK_THROWS_AS(PointSet(std::vector<Vector>{{1, 2}, {1}}), InputError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(PointSet(std::vector<Vector>{{nan, 0}}), InputError);
}

TEST_CASE("tolerances validate") {
    Tolerances t;
    CHECK_NOTHROW(t.validate());
    t.eq_tol = -1;
    CHECK_THROWS_AS(t.validate(), InputError);
    t = {};
    t.eq_tol = 1e-3;  // above active_tol
    CHECK_THROWS_AS(t.validate(), InputError);
}

TEST_CASE("support sublinearity and homogeneity over random sets") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const Tolerances tol;
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + it % 4;
        const PointSet A(random_points(rng, n, 2 + it % 5));
        Vector w1(n), w2(n);
        for (auto& c : w1) c = u(rng);
        for (auto& c : w2) c = u(rng);

        const double s1 = support(A, w1).value;
        const double s2 = support(A, w2).value;
        CHECK(support(A, add(w1, w2)).value <= s1 + s2 + tol.eq_tol);

        const double lam = 0.25 + 3.0 * std::abs(u(rng));
        const auto base = support(A, w1);
        const auto scaled = support(A, scale(w1, lam));
        CHECK(scaled.value ==
              doctest::Approx(lam * base.value).epsilon(1e-9));
        CHECK(scaled.argmax_indices == base.argmax_indices);
    }
}

TEST_CASE("origin augmentation clamps support at zero exactly") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + it % 3;
        const PointSet A(random_points(rng, n, 1 + it % 6));
        const PointSet A0 = augment_with_origin(A);
        Vector w(n);
        for (auto& c : w) c = u(rng);
        CHECK(support(A0, w).value == std::max(support(A, w).value, 0.0));
    }
}

TEST_CASE("BodyOracle convexity spot check fires on a nonconvex set") {
    BodyOracle bad;
    bad.dim = 1;
    bad.radius_bound = 3.0;
    bad.member = [](const Vector& x) {
        return std::abs(std::abs(x[0]) - 2.0) < 0.5;  // two disjoint bands
    };
    CHECK_THROWS_AS(bad.spot_check_convexity(), InputError);

    BodyOracle good;
    good.dim = 2;
    good.radius_bound = 1.0;
    good.member = [](const Vector& x) { return norm(x) <= 1.0; };
    CHECK_NOTHROW(good.spot_check_convexity());
}
