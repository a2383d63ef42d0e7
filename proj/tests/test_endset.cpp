#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "ebmod/endset.hpp"
#include "ebmod/estimator.hpp"
#include "oracles.hpp"

using namespace ebmod;

namespace {

PointSet pts(std::vector<Vector> v) { return PointSet(std::move(v)); }

std::vector<std::vector<std::size_t>> index_sets(const FaceCollection& c) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& f : c.faces) out.push_back(f.indices);
    return out;
}

}  // namespace

TEST_CASE("face_collection pinned examples") {
    const auto a = face_collection(pts({{0.5, 0.5}, {1, 1}}));
    CHECK(index_sets(a) == std::vector<std::vector<std::size_t>>{{1}});

    const auto b = face_collection(pts({{0, 0}, {2 * std::numbers::pi, 0}}));
    CHECK(index_sets(b) == std::vector<std::vector<std::size_t>>{{1}});

    const auto c = face_collection(pts({{0, 0}}));
    CHECK(c.faces.empty());

    const auto d = face_collection(pts({{1, 0}, {0, 1}}));
    CHECK(index_sets(d) ==
          std::vector<std::vector<std::size_t>>{{0}, {0, 1}, {1}});
}

TEST_CASE("face_collection enumerate capacity limit") {
    std::vector<Vector> many;
    for (int i = 0; i < 13; ++i)
        many.push_back({std::cos(0.1 + i * 0.1) + 2, std::sin(0.1 + i * 0.1)});
    CHECK_THROWS_AS(face_collection(PointSet(many)), CapacityError);
    FaceMode sample;
    sample.kind = FaceMode::Sample;
    sample.directions = 512;
    const auto c = face_collection(PointSet(many), sample);
    CHECK_FALSE(c.exhaustive);
    CHECK_FALSE(c.faces.empty());
}

TEST_CASE("sample mode underapproximates enumerate mode") {
    std::mt19937 rng(61);
    std::uniform_int_distribution<int> coord(-4, 4);
    FaceMode sample;
    sample.kind = FaceMode::Sample;
    sample.directions = 2048;
    for (int it = 0; it < 20; ++it) {
        std::vector<Vector> v;
        for (int i = 0; i < 2 + it % 5; ++i)
            v.push_back({double(coord(rng)), double(coord(rng))});
        const PointSet A(v);
        const auto full = face_collection(A);
        const auto sub = face_collection(A, sample);
        CHECK_FALSE(sub.exhaustive);
        const auto all = index_sets(full);
        for (const auto& f : sub.faces) {
            CHECK(std::find(all.begin(), all.end(), f.indices) != all.end());
            CHECK(verify_face(A, f));
        }
    }
}

TEST_CASE("end_set_distance pinned examples") {
    auto r = end_set_distance(pts({{0.5, 0.5}, {1, 1}}));
    REQUIRE(r.finite);
    CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.face.indices == std::vector<std::size_t>{1});

    r = end_set_distance(pts({{0.0}, {1.0}}));
    REQUIRE(r.finite);
    CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));

    r = end_set_distance(pts({{0, 0}}));
    CHECK_FALSE(r.finite);
}

TEST_CASE("gauge against the ray-sampling oracle on the disk-slab body") {
    const BodyOracle body = make_disk_slab_oracle();
    Tolerances tight;
    tight.eq_tol = 1e-10;
    for (const Vector& x : std::vector<Vector>{
             {0, 1}, {0, 0.5}, {2, 0.5}, {1, 1}, {0.3, 0.9}, {1.7, 0.2}}) {
        const double expected = oracles::ray_gauge(
            [&](const Vector& y) { return body.member(y); }, x);
        const GaugeValue g = gauge(body, x, tight);
        REQUIRE(g.finite);
        CHECK(g.value == doctest::Approx(expected).epsilon(1e-7));
    }
    CHECK(gauge(body, {0, 1}, tight).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gauge(body, {0, 0.5}, tight).value ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(gauge(body, Vector{0, 0}, tight).value == doctest::Approx(0.0));
}

TEST_CASE("gauge LP path on point sets") {
    const PointSet A = pts({{0.5, 0.5}, {1, 1}});
    CHECK(gauge(A, {1, 1}).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gauge(A, {0.25, 0.25}).value == doctest::Approx(0.25).epsilon(1e-9));
    CHECK_FALSE(gauge(A, {1, -1}).finite);  // outside pos C'
    CHECK(end_set_member(A, {1, 1}));
    CHECK_FALSE(end_set_member(A, {0.25, 0.25}));
}

TEST_CASE("gauge positive homogeneity") {
    const BodyOracle body = make_disk_slab_oracle();
    const PointSet A = pts({{1, 0}, {0, 2}, {1, 1}});
    for (double alpha : {0.5, 2.0, 10.0}) {
        const Vector x{0.4, 0.3};
        CHECK(gauge(body, scale(x, alpha)).value ==
              doctest::Approx(alpha * gauge(body, x).value).epsilon(1e-6));
        CHECK(gauge(A, scale(x, alpha)).value ==
              doctest::Approx(alpha * gauge(A, x).value).epsilon(1e-6));
    }
}

TEST_CASE("faces lie on the gauge-1 level set") {
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> coord(-4, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Tolerances tol;
    for (int it = 0; it < 15; ++it) {
        std::vector<Vector> v;
        for (int i = 0; i < 2 + it % 5; ++i)
            v.push_back({double(coord(rng)), double(coord(rng))});
        const PointSet A(v);
        const auto faces = face_collection(A);
        for (const auto& f : faces.faces) {
            CHECK(verify_face(A, f));
            for (int k = 0; k < 20; ++k) {
                Vector w(f.indices.size());
                double s = 0;
                for (auto& c : w) s += (c = u(rng) + 1e-3);
                Vector x(A.dim(), 0.0);
                for (std::size_t i = 0; i < f.indices.size(); ++i)
                    x = add(x, scale(A[f.indices[i]], w[i] / s));
                CHECK(gauge(A, x, tol).value ==
                      doctest::Approx(1.0).epsilon(1e-7));
            }
        }
        const auto d = end_set_distance(A);
        if (d.finite) {
            CHECK(d.distance > 0.0);
            CHECK(d.distance >= min_norm_point(A).distance - 1e-9);
        }
    }
}

TEST_CASE("polytope end-set distance stable under sampled cross-check") {
    std::mt19937 rng(81);
    std::uniform_int_distribution<int> coord(-5, 5);
    FaceMode sample;
    sample.kind = FaceMode::Sample;
    sample.directions = 10000;
    for (int it = 0; it < 10; ++it) {
        std::vector<Vector> v;
        for (int i = 0; i < 3 + it % 4; ++i)
            v.push_back({double(coord(rng)), double(coord(rng))});
        const PointSet A(v);
        const auto full = end_set_distance(A);
        const auto approx = end_set_distance(A, sample);
        if (!full.finite) {
            CHECK_FALSE(approx.finite);
            continue;
        }
        if (approx.finite) CHECK(approx.distance >= full.distance - 1e-6);
    }
}

TEST_CASE("serial and parallel face enumeration agree") {
    std::vector<Vector> v;
    for (int i = 0; i < 10; ++i)
        v.push_back({std::cos(0.2 + 0.17 * i) + 1.2, std::sin(0.2 + 0.17 * i)});
    const PointSet A(v);
    const auto s = face_collection(A, {}, {}, Exec::Serial);
    const auto p = face_collection(A, {}, {}, Exec::Parallel);
    REQUIRE(s.faces.size() == p.faces.size());
    for (std::size_t i = 0; i < s.faces.size(); ++i) {
        CHECK(s.faces[i].indices == p.faces[i].indices);
        CHECK(s.faces[i].witness == p.faces[i].witness);
    }
}
