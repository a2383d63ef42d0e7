#include "ebmod/endset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ebmod/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ebmod {

namespace {

// Margin LP over z = (w, s): maximize s subject to
//   <a, w> = 1          for a in the candidate face,
//   <a, w> + s <= 1     for the remaining generators,
//   s <= 1              (cap; keeps the LP bounded when the complement is empty).
// The subset is an exposed face with positive support iff s* > lp_margin.
std::optional<Face> certify_subset(const PointSet& A,
                                   const std::vector<std::size_t>& subset,
                                   const Tolerances& tol) {
    const std::size_t n = A.dim();
    std::vector<bool> in(A.size(), false);
    for (std::size_t i : subset) in[i] = true;

    LpProblem lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    for (std::size_t i : subset) {
        Vector row(n + 1, 0.0);
        std::copy(A[i].begin(), A[i].end(), row.begin());
        lp.eq_rows.push_back({std::move(row), 1.0});
    }
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (in[i]) continue;
        Vector row(n + 1, 0.0);
        std::copy(A[i].begin(), A[i].end(), row.begin());
        row[n] = 1.0;
        lp.ineq_rows.push_back({std::move(row), 1.0});
    }
    lp.upper_bounds.assign(n + 1, std::nullopt);
    lp.upper_bounds[n] = 1.0;

    const LpResult res = lp_solve(lp, tol);
    if (res.status != LpStatus::Optimal || res.value <= tol.lp_margin)
        return std::nullopt;
    Face f;
    f.indices = subset;
    std::sort(f.indices.begin(), f.indices.end());
    f.witness.assign(res.z.begin(), res.z.begin() + long(n));
    f.margin = res.value;
    return f;
}

void sort_faces(std::vector<Face>& faces) {
    std::sort(faces.begin(), faces.end(),
              [](const Face& a, const Face& b) { return a.indices < b.indices; });
}

}  // namespace

bool verify_face(const PointSet& A, const Face& f, const Tolerances& tol) {
    std::vector<bool> in(A.size(), false);
    for (std::size_t i : f.indices) {
        if (i >= A.size()) return false;
        in[i] = true;
    }
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double v = dot(A[i], f.witness);
        if (in[i]) {
            if (std::fabs(v - 1.0) > tol.eq_tol * 10) return false;
        } else {
            if (v > 1.0 - tol.lp_margin / 2) return false;
        }
    }
    return true;
}

FaceCollection face_collection(const PointSet& A, const FaceMode& mode,
                               const Tolerances& tol, Exec exec) {
    FaceCollection out;
    if (mode.kind == FaceMode::Enumerate) {
        if (A.size() > 12)
            throw CapacityError(
                "face_collection: |A| > 12 in enumerate mode; use sample mode");
        const std::size_t total = (std::size_t(1) << A.size()) - 1;
        std::vector<std::optional<Face>> results(total);
        auto work = [&](std::size_t mask) {
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < A.size(); ++i)
                if (mask & (std::size_t(1) << i)) subset.push_back(i);
            results[mask - 1] = certify_subset(A, subset, tol);
        };
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long long mask = 1; mask <= (long long)total; ++mask)
                work(std::size_t(mask));
        } else {
            for (std::size_t mask = 1; mask <= total; ++mask) work(mask);
        }
        for (auto& r : results)
            if (r) out.faces.push_back(std::move(*r));
        out.exhaustive = true;
    } else {
        const auto dirs = unit_directions(A.dim(), mode.directions, mode.seed);
        std::set<std::vector<std::size_t>> candidates;
        std::vector<std::vector<std::size_t>> per_dir(dirs.size());
        auto work = [&](std::size_t d) {
            const SupportResult s = support(A, dirs[d], tol);
            if (s.value > tol.lp_margin) per_dir[d] = s.argmax_indices;
        };
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (long long d = 0; d < (long long)dirs.size(); ++d)
                work(std::size_t(d));
        } else {
            for (std::size_t d = 0; d < dirs.size(); ++d) work(d);
        }
        for (auto& c : per_dir)
            if (!c.empty()) candidates.insert(std::move(c));
        for (const auto& subset : candidates)
            if (auto f = certify_subset(A, subset, tol)) out.faces.push_back(*f);
        out.exhaustive = false;
    }
    sort_faces(out.faces);
    return out;
}

EndSetDistance end_set_distance(const PointSet& A, const FaceMode& mode,
                                const Tolerances& tol, Exec exec) {
    const FaceCollection fc = face_collection(A, mode, tol, exec);
    EndSetDistance out;
    out.exhaustive = fc.exhaustive;
    out.distance = std::numeric_limits<double>::infinity();
    out.finite = false;
    for (const Face& f : fc.faces) {
        std::vector<Vector> pts;
        pts.reserve(f.indices.size());
        for (std::size_t i : f.indices) pts.push_back(A[i]);
        const MinNormResult mn = min_norm_point(PointSet(std::move(pts)), tol);
        if (!out.finite || mn.distance < out.distance) {
            out.finite = true;
            out.distance = mn.distance;
            out.face = f;
            out.witness = mn;
        }
    }
    return out;
}

GaugeValue gauge(const PointSet& A, const Vector& x, const Tolerances& tol) {
    require_dim(x, A.dim(), "gauge");
    GaugeValue g;
    g.method = GaugeValue::Lp;
    if (norm(x) == 0.0) return g;  // gamma(0) = 0

    // Gauge w.r.t. C' = co(A u {0}): min sum(mu) s.t. sum mu_i a_i = x,
    // mu >= 0 (the origin absorbs any deficit below lambda).
    const std::size_t m = A.size();
    LpProblem lp;
    lp.objective.assign(m, -1.0);  // maximize -sum(mu)
    for (std::size_t c = 0; c < A.dim(); ++c) {
        Vector row(m);
        for (std::size_t i = 0; i < m; ++i) row[i] = A[i][c];
        lp.eq_rows.push_back({std::move(row), x[c]});
    }
    lp.lower_bounds.assign(m, 0.0);
    const LpResult res = lp_solve(lp, tol);
    if (res.status != LpStatus::Optimal) {
        g.finite = false;
        g.value = std::numeric_limits<double>::infinity();
        return g;
    }
    g.value = std::max(0.0, -res.value);
    return g;
}

GaugeValue gauge(const BodyOracle& body, const Vector& x, const Tolerances& tol) {
    require_dim(x, body.dim, "gauge");
    GaugeValue g;
    g.method = GaugeValue::Bisection;
    if (norm(x) == 0.0) return g;
    if (!body.contains_origin)
        throw InputError("gauge: oracle body must contain the origin");

    // gamma(x) = inf{ t > 0 : x/t in C }; member(x/t) is monotone in t
    // since 0 in C.  Doubling from eq_tol, capped at 1/eq_tol.
    auto member_at = [&](double t) { return body.member(scale(x, 1.0 / t)); };
    double hi = tol.eq_tol;
    const double cap = 1.0 / tol.eq_tol;
    bool found = false;
    while (hi <= cap) {
        if (member_at(hi)) { found = true; break; }
        hi *= 2.0;
    }
    if (!found) {
        g.finite = false;
        g.value = std::numeric_limits<double>::infinity();
        return g;
    }
    double lo = hi / 2.0;
    const double width = tol.eq_tol * (1.0 + norm(x));
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (member_at(mid)) hi = mid; else lo = mid;
    }
    g.value = 0.5 * (lo + hi);
    return g;
}

bool end_set_member(const PointSet& A, const Vector& x, const Tolerances& tol) {
    const GaugeValue g = gauge(A, x, tol);
    return g.finite && std::fabs(g.value - 1.0) <= tol.active_tol;
}

bool end_set_member(const BodyOracle& body, const Vector& x,
                    const Tolerances& tol) {
    const GaugeValue g = gauge(body, x, tol);
    return g.finite && std::fabs(g.value - 1.0) <= tol.active_tol;
}

}  // namespace ebmod
