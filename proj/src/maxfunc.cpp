#include "ebmod/maxfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace ebmod {

std::size_t SmoothPiece::dim() const {
    if (const auto* a = std::get_if<AffinePiece>(&form)) return a->a.size();
    return std::get<QuadraticPiece>(form).b.size();
}

double SmoothPiece::eval(const Vector& x) const {
    if (const auto* a = std::get_if<AffinePiece>(&form))
        return dot(a->a, x) - a->b;
    const auto& q = std::get<QuadraticPiece>(form);
    double v = q.c + dot(q.b, x);
    for (std::size_t i = 0; i < x.size(); ++i) v += x[i] * dot(q.Q[i], x);
    return v;
}

Vector SmoothPiece::gradient(const Vector& x) const {
    if (const auto* a = std::get_if<AffinePiece>(&form)) return a->a;
    const auto& q = std::get<QuadraticPiece>(form);
    Vector g = q.b;
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += 2.0 * dot(q.Q[i], x);
    return g;
}

void SmoothPiece::validate(unsigned seed) const {
    const std::size_t n = dim();
    if (n == 0) throw InputError("SmoothPiece: zero dimension");
    if (const auto* a = std::get_if<AffinePiece>(&form)) {
        if (!all_finite(a->a) || !std::isfinite(a->b))
            throw InputError("SmoothPiece: non-finite affine coefficients");
    } else {
        const auto& q = std::get<QuadraticPiece>(form);
        if (q.Q.size() != n) throw InputError("SmoothPiece: Q size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (q.Q[i].size() != n || !all_finite(q.Q[i]))
                throw InputError("SmoothPiece: bad Q row");
            for (std::size_t j = 0; j < n; ++j)
                if (std::fabs(q.Q[i][j] - q.Q[j][i]) > 1e-12)
                    throw InputError("SmoothPiece: Q not symmetric");
        }
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        Vector x(n);
        for (auto& c : x) c = u(rng);
        const Vector g = gradient(x);
        const double h = 1e-6 * (1.0 + norm(x));
        for (std::size_t i = 0; i < n; ++i) {
            Vector xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (eval(xp) - eval(xm)) / (2.0 * h);
            if (std::fabs(fd - g[i]) > 1e-5 * (1.0 + std::fabs(g[i])))
                throw InputError("SmoothPiece: gradient/finite-difference mismatch");
        }
    }
}

MaxFunction::MaxFunction(std::vector<SmoothPiece> pieces)
    : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InputError("MaxFunction: no pieces");
    dim_ = pieces_.front().dim();
    unsigned seed = 7;
    for (const auto& p : pieces_) {
        if (p.dim() != dim_) throw InputError("MaxFunction: non-uniform dimension");
        p.validate(seed++);
    }
}

double MaxFunction::eval(const Vector& x) const {
    require_dim(x, dim_, "MaxFunction::eval");
    double v = pieces_.front().eval(x);
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        v = std::max(v, pieces_[i].eval(x));
    return v;
}

std::vector<std::size_t> active_set(const MaxFunction& phi, const Vector& x,
                                    double tol) {
    const double v = phi.eval(x);
    const double cut = v - tol * (1.0 + std::fabs(v));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi.piece(i).eval(x) >= cut) out.push_back(i);
    return out;
}

Subdifferential subdifferential(const MaxFunction& phi, const Vector& x,
                                const Tolerances& tol) {
    const auto act = active_set(phi, x, tol);
    std::vector<Vector> grads;
    grads.reserve(act.size());
    for (std::size_t i : act) grads.push_back(phi.piece(i).gradient(x));
    PointSet ps(grads);
    Subdifferential sd{std::move(ps), {}};
    sd.pieces_per_point.resize(sd.gradients.size());
    for (std::size_t k = 0; k < act.size(); ++k) {
        for (std::size_t p = 0; p < sd.gradients.size(); ++p) {
            if (sd.gradients[p] == grads[k]) {
                sd.pieces_per_point[p].push_back(act[k]);
                break;
            }
        }
    }
    return sd;
}

LimitingCollection limiting_collection(const MaxFunction& phi,
                                       const Vector& xbar,
                                       const SampleConfig& cfg,
                                       const Tolerances& tol, Exec exec) {
    require_dim(xbar, phi.dim(), "limiting_collection");
    if (std::fabs(phi.eval(xbar)) > tol.active_tol)
        throw InputError("limiting_collection: phi(xbar) != 0 (not on boundary)");

    const auto dirs = unit_directions(phi.dim(), cfg.directions, cfg.seed);
    const auto radii = cfg.shells.radii();
    const std::size_t m = radii.size();
    const std::size_t window = (m + 2) / 3;  // ceil(m/3)

    // per direction: active set at each shell (empty = phi <= 0 there)
    std::vector<std::vector<std::vector<std::size_t>>> grid(
        dirs.size(), std::vector<std::vector<std::size_t>>(m));
    auto work = [&](std::size_t d) {
        for (std::size_t j = 0; j < m; ++j) {
            const Vector x = add(xbar, scale(dirs[d], radii[j]));
            if (phi.eval(x) > 0.0) grid[d][j] = active_set(phi, x, tol);
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long d = 0; d < (long long)dirs.size(); ++d)
            work(std::size_t(d));
    } else {
        for (std::size_t d = 0; d < dirs.size(); ++d) work(d);
    }

    // persistence filter: a set qualifies when it shows up at every one
    // of the last `window` shells along some direction
    std::map<std::vector<std::size_t>, std::vector<double>> kept;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const auto& tail0 = grid[d][m - window];
        if (tail0.empty()) continue;
        bool persistent = true;
        for (std::size_t j = m - window + 1; j < m; ++j)
            if (grid[d][j] != tail0) { persistent = false; break; }
        if (!persistent) continue;
        auto& radlist = kept[tail0];
        for (std::size_t j = m - window; j < m; ++j)
            if (std::find(radlist.begin(), radlist.end(), radii[j]) ==
                radlist.end())
                radlist.push_back(radii[j]);
    }

    LimitingCollection out;
    for (auto& [set, rads] : kept) {
        out.index_sets.push_back(set);
        std::sort(rads.begin(), rads.end(), std::greater<>());
        out.radii_seen.push_back(rads);
    }
    return out;
}

LowerEstimate lower_estimate(const MaxFunction& phi, const Vector& xbar,
                             const SampleConfig& cfg, const Tolerances& tol,
                             Exec exec) {
    const LimitingCollection col = limiting_collection(phi, xbar, cfg, tol, exec);
    LowerEstimate out;
    out.value = std::numeric_limits<double>::infinity();
    for (const auto& set : col.index_sets) {
        std::vector<Vector> grads;
        grads.reserve(set.size());
        for (std::size_t i : set) grads.push_back(phi.piece(i).gradient(xbar));
        const MinNormResult mn = min_norm_point(PointSet(std::move(grads)), tol);
        if (!out.finite || mn.distance < out.value) {
            out.finite = true;
            out.value = mn.distance;
            out.witness_set = set;
            out.witness = mn;
        }
    }
    if (out.finite && out.value > 0)
        out.certificate_direction = scale(out.witness.point, 1.0 / out.value);
    return out;
}

ExposedCollection exposed_collection(const MaxFunction& phi, const Vector& xbar,
                                     const Tolerances& tol, Exec exec) {
    const Subdifferential sd = subdifferential(phi, xbar, tol);
    ExposedCollection out;
    out.faces = face_collection(sd.gradients, {}, tol, exec);
    for (const Face& f : out.faces.faces) {
        std::vector<std::size_t> pieces;
        for (std::size_t p : f.indices)
            pieces.insert(pieces.end(), sd.pieces_per_point[p].begin(),
                          sd.pieces_per_point[p].end());
        std::sort(pieces.begin(), pieces.end());
        out.piece_sets.push_back(std::move(pieces));
    }
    return out;
}

EndSetDistance upper_estimate(const MaxFunction& phi, const Vector& xbar,
                              const Tolerances& tol, Exec exec) {
    const Subdifferential sd = subdifferential(phi, xbar, tol);
    return end_set_distance(sd.gradients, {}, tol, exec);
}

}  // namespace ebmod
