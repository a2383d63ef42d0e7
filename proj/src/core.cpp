#include "ebmod/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ebmod {

void Tolerances::validate() const {
    if (eq_tol <= 0 || active_tol <= 0 || lp_margin <= 0 || dist_tol <= 0)
        throw InputError("tolerances must be strictly positive");
    if (eq_tol > active_tol)
        throw InputError("eq_tol must not exceed active_tol");
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

Vector add(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector scale(const Vector& a, double s) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

bool all_finite(const Vector& a) {
    return std::all_of(a.begin(), a.end(),
                       [](double x) { return std::isfinite(x); });
}

void require_dim(const Vector& v, std::size_t dim, const char* what) {
    if (v.size() != dim)
        throw InputError(std::string(what) + ": dimension mismatch");
}

PointSet::PointSet(std::vector<Vector> points, std::vector<std::string> labels) {
    if (points.empty()) throw InputError("PointSet: empty point list");
    if (!labels.empty() && labels.size() != points.size())
        throw InputError("PointSet: label count differs from point count");
    dim_ = points.front().size();
    if (dim_ == 0) throw InputError("PointSet: zero-dimensional points");
    bool labelled = !labels.empty();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vector& p = points[i];
        if (p.size() != dim_)
            throw InputError("PointSet: non-uniform dimension");
        if (!all_finite(p))
            throw InputError("PointSet: non-finite coordinate");
        // exact-equality dedup keeps face certificates unambiguous
        bool dup = false;
        for (const Vector& q : points_)
            if (q == p) { dup = true; break; }
        if (!dup) {
            points_.push_back(p);
            if (labelled) labels_.push_back(labels[i]);
        }
    }
}

void BodyOracle::spot_check_convexity(unsigned seed, int pairs) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-radius_bound, radius_bound);
    std::vector<Vector> members;
    for (int k = 0; k < pairs * 20 && members.size() < 2 * std::size_t(pairs); ++k) {
        Vector x(dim);
        for (auto& c : x) c = u(rng);
        if (member(x)) members.push_back(std::move(x));
    }
    for (std::size_t i = 0; i + 1 < members.size(); i += 2) {
        Vector mid = scale(add(members[i], members[i + 1]), 0.5);
        if (!member(mid))
            throw InputError("BodyOracle: midpoint of two members not a member");
    }
}

SupportResult support(const PointSet& A, const Vector& w, const Tolerances& tol) {
    require_dim(w, A.dim(), "support");
    SupportResult r;
    r.value = dot(A[0], w);
    for (std::size_t i = 1; i < A.size(); ++i)
        r.value = std::max(r.value, dot(A[i], w));
    const double cut = r.value - tol.eq_tol * (1.0 + std::fabs(r.value));
    for (std::size_t i = 0; i < A.size(); ++i)
        if (dot(A[i], w) >= cut) r.argmax_indices.push_back(i);
    return r;
}

PointSet augment_with_origin(const PointSet& A) {
    std::vector<Vector> pts = A.points();
    pts.push_back(Vector(A.dim(), 0.0));
    std::vector<std::string> labels = A.labels();
    if (!labels.empty()) labels.push_back("origin");
    return PointSet(std::move(pts), std::move(labels));
}

}  // namespace ebmod
