#include <cmath>
#include <random>

#include "doctest.h"

#include "ebmod/estimator.hpp"
#include "ebmod/maxfunc.hpp"
#include "oracles.hpp"

using namespace ebmod;

namespace {

// max of a quadratic through the origin and the affine piece x1 + x2
MaxFunction quad_affine() {
    std::vector<SmoothPiece> pieces;
    pieces.push_back({QuadraticPiece{{{1, 0}, {0, 1}}, {0.5, 0.5}, 0.0}});
    pieces.push_back({AffinePiece{{1, 1}, 0.0}});
    return MaxFunction(std::move(pieces));
}

MaxFunction two_axes() {
    std::vector<SmoothPiece> pieces;
    pieces.push_back({AffinePiece{{1, 0}, 0.0}});
    pieces.push_back({AffinePiece{{0, 1}, 0.0}});
    return MaxFunction(std::move(pieces));
}

}  // namespace

TEST_CASE("eval and active sets") {
    const MaxFunction phi = quad_affine();
    CHECK(phi.eval({0, 0}) == doctest::Approx(0.0));
    CHECK(phi.eval({1, 1}) == doctest::Approx(3.0));

    CHECK(active_set(phi, {0, 0}) == std::vector<std::size_t>{0, 1});
    CHECK(active_set(phi, {1, 1}) == std::vector<std::size_t>{0});

    std::vector<SmoothPiece> single;
    single.push_back({AffinePiece{{2, -1}, 0.5}});
    const MaxFunction one(std::move(single));
    CHECK(one.eval({3, 1}) == doctest::Approx(2 * 3 - 1 - 0.5));
    CHECK(active_set(one, {3, 1}) == std::vector<std::size_t>{0});
}

TEST_CASE("piece validation rejects bad gradients and asymmetry") {
    const SmoothPiece asym{QuadraticPiece{{{1, 0.5}, {0, 1}}, {0, 0}, 0}};
    CHECK_THROWS_AS(asym.validate(), InputError);
    const SmoothPiece sym{QuadraticPiece{{{1, 0.5}, {0.5, 1}}, {0, 0}, 0}};
    CHECK_NOTHROW(sym.validate());
    const double nan = std::nan("");
    const SmoothPiece bad_affine{AffinePiece{{nan, 0}, 0}};
    CHECK_THROWS_AS(bad_affine.validate(), InputError);
}

TEST_CASE("gradients match finite differences on random pieces") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 1 + it % 4;
        QuadraticPiece q;
        q.Q.assign(n, Vector(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                q.Q[i][j] = q.Q[j][i] = u(rng);
        q.b.assign(n, 0.0);
        for (auto& c : q.b) c = u(rng);
        q.c = u(rng);
        const SmoothPiece p{q};
        CHECK_NOTHROW(p.validate(unsigned(100 + it)));

        Vector x(n);
        for (auto& c : x) c = u(rng);
        const Vector g = p.gradient(x);
        const double h = 1e-6 * (1.0 + norm(x));
        for (std::size_t i = 0; i < n; ++i) {
            Vector xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("subdifferential at pinned points") {
    const MaxFunction phi = quad_affine();
    auto sd = subdifferential(phi, {0, 0});
    REQUIRE(sd.gradients.size() == 2);
    CHECK(sd.gradients[0] == Vector{0.5, 0.5});
    CHECK(sd.gradients[1] == Vector{1.0, 1.0});

    sd = subdifferential(phi, {1, 1});
    REQUIRE(sd.gradients.size() == 1);
    CHECK(sd.gradients[0] == Vector{2.5, 2.5});
}

TEST_CASE("limiting_collection on the quad-affine fixture") {
    const MaxFunction phi = quad_affine();
    const auto col = limiting_collection(phi, {0, 0});
    REQUIRE_FALSE(col.index_sets.empty());
    CHECK_FALSE(col.exhaustive);
    bool has_affine_only = false;
    for (const auto& s : col.index_sets) {
        // outer semicontinuity: subsets of the active set at the center
        for (std::size_t i : s) CHECK(i <= 1);
        if (s == std::vector<std::size_t>{1}) has_affine_only = true;
    }
    CHECK(has_affine_only);

    CHECK_THROWS_AS(limiting_collection(phi, {1, 1}), InputError);
}

TEST_CASE("limiting_collection single affine piece") {
    std::vector<SmoothPiece> pieces;
    pieces.push_back({AffinePiece{{3, 4}, 0.0}});
    const MaxFunction phi(std::move(pieces));
    const auto col = limiting_collection(phi, {0, 0});
    CHECK(col.index_sets == std::vector<std::vector<std::size_t>>{{0}});

    const auto le = lower_estimate(phi, {0, 0});
    REQUIRE(le.finite);
    CHECK(le.value == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("lower_estimate pinned and brute-forced values") {
    const auto le = lower_estimate(quad_affine(), {0, 0});
    REQUIRE(le.finite);
    CHECK(le.value == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-6));
    REQUIRE_FALSE(le.certificate_direction.empty());
    CHECK(norm(le.certificate_direction) == doctest::Approx(1.0).epsilon(1e-9));

    // two axis pieces: collected subsets of {{0},{1},{0,1}}, min distance
    // is the segment midpoint
    const double seg = oracles::brute_min_norm({{1, 0}, {0, 1}});
    const auto le2 = lower_estimate(two_axes(), {0, 0});
    REQUIRE(le2.finite);
    CHECK(le2.value == doctest::Approx(std::min({1.0, 1.0, seg})).epsilon(1e-6));
}

TEST_CASE("exposed_collection and upper_estimate") {
    const auto ec = exposed_collection(quad_affine(), {0, 0});
    REQUIRE(ec.piece_sets.size() == 1);
    CHECK(ec.piece_sets[0] == std::vector<std::size_t>{1});

    CHECK(upper_estimate(quad_affine(), {0, 0}).distance ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    std::vector<SmoothPiece> single;
    single.push_back({AffinePiece{{1, 0}, 0.0}});
    CHECK(upper_estimate(MaxFunction(std::move(single)), {0, 0}).distance ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sandwich and scaling invariances") {
    const Tolerances tol;
    for (const char* name : {"max-quad-affine"}) {
        const Scenario s = make_builtin(name);
        const auto le = lower_estimate(*s.phi, s.base_point);
        const auto ue = upper_estimate(*s.phi, s.base_point);
        CHECK(le.value <= ue.distance + 1e-6);
    }

    // doubling every piece doubles both estimates, same index sets
    std::vector<SmoothPiece> doubled;
    doubled.push_back({QuadraticPiece{{{2, 0}, {0, 2}}, {1, 1}, 0.0}});
    doubled.push_back({AffinePiece{{2, 2}, 0.0}});
    const MaxFunction phi2(std::move(doubled));
    const MaxFunction phi = quad_affine();

    const auto c1 = limiting_collection(phi, {0, 0});
    const auto c2 = limiting_collection(phi2, {0, 0});
    CHECK(c1.index_sets == c2.index_sets);
    CHECK(lower_estimate(phi2, {0, 0}).value ==
          doctest::Approx(2 * lower_estimate(phi, {0, 0}).value).epsilon(1e-6));
    CHECK(upper_estimate(phi2, {0, 0}).distance ==
          doctest::Approx(2 * upper_estimate(phi, {0, 0}).distance)
              .epsilon(1e-6));
}

TEST_CASE("polyhedral fixture: lower equals upper") {
    const MaxFunction phi = two_axes();
    const auto le = lower_estimate(phi, {0, 0});
    const auto ue = upper_estimate(phi, {0, 0});
    REQUIRE(le.finite);
    REQUIRE(ue.finite);
    CHECK(le.value == doctest::Approx(ue.distance).epsilon(1e-6));
}

TEST_CASE("serial and parallel limiting collections agree") {
    const MaxFunction phi = quad_affine();
    SampleConfig cfg;
    cfg.directions = 512;
    const auto s = limiting_collection(phi, {0, 0}, cfg, {}, Exec::Serial);
    const auto p = limiting_collection(phi, {0, 0}, cfg, {}, Exec::Parallel);
    CHECK(s.index_sets == p.index_sets);
    CHECK(s.radii_seen == p.radii_seen);
}
