#include "ebmod/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ebmod {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kSimplexCap = 20000;

// Tableau simplex, maximize.  Columns 0..n-1 are variables, column n is rhs.
struct Tableau {
    std::size_t m = 0, n = 0;
    std::vector<std::vector<double>> a;  // m rows x (n+1)
    std::vector<std::size_t> basis;      // per row

    void pivot(std::size_t pr, std::size_t pc) {
        const double piv = a[pr][pc];
        for (double& v : a[pr]) v /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr) continue;
            const double f = a[r][pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= n; ++c) a[r][c] -= f * a[pr][c];
        }
        basis[pr] = pc;
    }
};

// Runs Bland-rule simplex on the tableau for the given maximize objective.
// `allowed` masks columns eligible to enter.  Returns false when unbounded.
bool run_simplex(Tableau& t, const std::vector<double>& obj,
                 const std::vector<bool>& allowed) {
    for (int iter = 0; iter < kSimplexCap; ++iter) {
        // reduced costs: obj_j - c_B . column_j
        std::size_t enter = t.n;
        for (std::size_t j = 0; j < t.n; ++j) {
            if (!allowed[j]) continue;
            bool basic = false;
            for (std::size_t r = 0; r < t.m; ++r)
                if (t.basis[r] == j) { basic = true; break; }
            if (basic) continue;
            double red = obj[j];
            for (std::size_t r = 0; r < t.m; ++r)
                red -= obj[t.basis[r]] * t.a[r][j];
            if (red > kPivotEps) { enter = j; break; }  // Bland: smallest index
        }
        if (enter == t.n) return true;  // optimal
        std::size_t leave = t.m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.m; ++r) {
            if (t.a[r][enter] <= kPivotEps) continue;
            const double ratio = t.a[r][t.n] / t.a[r][enter];
            if (ratio < best - 1e-15 ||
                (ratio < best + 1e-15 &&
                 (leave == t.m || t.basis[r] < t.basis[leave]))) {
                best = ratio;
                leave = r;
            }
        }
        if (leave == t.m) return false;  // unbounded
        t.pivot(leave, enter);
    }
    throw NumericalError("lp_solve: simplex iteration cap exceeded");
}

}  // namespace

LpResult lp_solve(const LpProblem& p, const Tolerances& tol) {
    const std::size_t nv = p.objective.size();
    if (!all_finite(p.objective)) throw InputError("lp_solve: non-finite objective");

    // Collect rows: equalities first, then inequalities (incl. bounds).
    std::vector<std::pair<Vector, double>> eqs = p.eq_rows;
    std::vector<std::pair<Vector, double>> ineqs = p.ineq_rows;
    auto unit_row = [&](std::size_t j, double sign) {
        Vector r(nv, 0.0);
        r[j] = sign;
        return r;
    };
    for (std::size_t j = 0; j < p.lower_bounds.size(); ++j)
        if (p.lower_bounds[j]) ineqs.push_back({unit_row(j, -1.0), -*p.lower_bounds[j]});
    for (std::size_t j = 0; j < p.upper_bounds.size(); ++j)
        if (p.upper_bounds[j]) ineqs.push_back({unit_row(j, 1.0), *p.upper_bounds[j]});
    for (const auto& [row, rhs] : eqs)
        if (row.size() != nv || !all_finite(row) || !std::isfinite(rhs))
            throw InputError("lp_solve: bad equality row");
    for (const auto& [row, rhs] : ineqs)
        if (row.size() != nv || !all_finite(row) || !std::isfinite(rhs))
            throw InputError("lp_solve: bad inequality row");

    // Standard form: every variable split x_j = u_j - v_j (u,v >= 0),
    // one slack per inequality, one artificial per row.
    const std::size_t m = eqs.size() + ineqs.size();
    const std::size_t n_split = 2 * nv;
    const std::size_t n_slack = ineqs.size();
    const std::size_t n_total = n_split + n_slack + m;

    Tableau t;
    t.m = m;
    t.n = n_total;
    t.a.assign(m, std::vector<double>(n_total + 1, 0.0));
    t.basis.resize(m);

    std::size_t row = 0;
    auto fill_row = [&](const Vector& coef, double rhs, std::size_t slack_idx) {
        double s = 1.0;
        if (rhs < 0) s = -1.0;
        for (std::size_t j = 0; j < nv; ++j) {
            t.a[row][2 * j] = s * coef[j];
            t.a[row][2 * j + 1] = -s * coef[j];
        }
        if (slack_idx != n_total) t.a[row][slack_idx] = s;
        t.a[row][n_split + n_slack + row] = 1.0;  // artificial
        t.a[row][n_total] = s * rhs;
        t.basis[row] = n_split + n_slack + row;
        ++row;
    };
    for (const auto& [coef, rhs] : eqs) fill_row(coef, rhs, n_total);
    for (std::size_t k = 0; k < ineqs.size(); ++k)
        fill_row(ineqs[k].first, ineqs[k].second, n_split + k);

    std::vector<bool> allow_all(n_total, true);
    std::vector<bool> allow_real(n_total, true);
    for (std::size_t j = n_split + n_slack; j < n_total; ++j) allow_real[j] = false;

    // Phase 1: maximize -(sum of artificials).
    std::vector<double> obj1(n_total, 0.0);
    for (std::size_t j = n_split + n_slack; j < n_total; ++j) obj1[j] = -1.0;
    if (!run_simplex(t, obj1, allow_all))
        throw NumericalError("lp_solve: phase-1 unbounded");
    double art_sum = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis[r] >= n_split + n_slack) art_sum += t.a[r][n_total];
    if (art_sum > tol.eq_tol) return {LpStatus::Infeasible, {}, 0.0};

    // Drive any residual artificials out of the basis.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < n_split + n_slack) continue;
        std::size_t pc = n_total;
        for (std::size_t j = 0; j < n_split + n_slack; ++j)
            if (std::fabs(t.a[r][j]) > kPivotEps) { pc = j; break; }
        if (pc != n_total) t.pivot(r, pc);
    }

    // Phase 2.
    std::vector<double> obj2(n_total, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        obj2[2 * j] = p.objective[j];
        obj2[2 * j + 1] = -p.objective[j];
    }
    if (!run_simplex(t, obj2, allow_real)) return {LpStatus::Unbounded, {}, 0.0};

    Vector xs(n_total, 0.0);
    for (std::size_t r = 0; r < m; ++r) xs[t.basis[r]] = t.a[r][n_total];
    LpResult res;
    res.status = LpStatus::Optimal;
    res.z.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) res.z[j] = xs[2 * j] - xs[2 * j + 1];
    res.value = dot(p.objective, res.z);
    return res;
}

namespace {

// Min-norm point of the affine hull of the selected generators.
// Solves the KKT system [0 1^T; 1 G] [mu; alpha] = [1; 0] by Gaussian
// elimination; retries with a tiny ridge when near-singular.
bool affine_minimizer(const std::vector<Vector>& pts, Vector& alpha) {
    const std::size_t k = pts.size();
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double ridge = attempt == 0 ? 0.0 : 1e-12;
        std::vector<std::vector<double>> M(k + 1, std::vector<double>(k + 2, 0.0));
        M[0][0] = 0.0;
        for (std::size_t j = 0; j < k; ++j) M[0][j + 1] = 1.0;
        M[0][k + 1] = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            M[i + 1][0] = 1.0;
            for (std::size_t j = 0; j < k; ++j)
                M[i + 1][j + 1] = dot(pts[i], pts[j]) + (i == j ? ridge : 0.0);
            M[i + 1][k + 1] = 0.0;
        }
        // partial-pivot elimination
        bool ok = true;
        for (std::size_t c = 0; c <= k; ++c) {
            std::size_t pr = c;
            for (std::size_t r = c + 1; r <= k; ++r)
                if (std::fabs(M[r][c]) > std::fabs(M[pr][c])) pr = r;
            if (std::fabs(M[pr][c]) < 1e-13) { ok = false; break; }
            std::swap(M[c], M[pr]);
            for (std::size_t r = 0; r <= k; ++r) {
                if (r == c) continue;
                const double f = M[r][c] / M[c][c];
                if (f == 0.0) continue;
                for (std::size_t cc = c; cc <= k + 1; ++cc) M[r][cc] -= f * M[c][cc];
            }
        }
        if (!ok) continue;
        alpha.resize(k);
        for (std::size_t j = 0; j < k; ++j) alpha[j] = M[j + 1][k + 1] / M[j + 1][j + 1];
        return true;
    }
    return false;
}

}  // namespace

MinNormResult min_norm_point(const PointSet& A, const Tolerances& tol) {
    const std::size_t m = A.size();
    const std::size_t n = A.dim();

    // Start from the shortest generator.
    std::size_t start = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (norm(A[i]) < norm(A[start])) start = i;

    std::vector<std::size_t> corral{start};
    Vector lambda{1.0};
    Vector x = A[start];

    auto rebuild = [&](Vector& out) {
        out.assign(n, 0.0);
        for (std::size_t k = 0; k < corral.size(); ++k)
            for (std::size_t c = 0; c < n; ++c) out[c] += lambda[k] * A[corral[k]][c];
    };

    const int cap = 1000 + int(50 * m);
    for (int iter = 0; iter < cap; ++iter) {
        const double xx = dot(x, x);
        if (xx < 1e-28) break;  // at the origin
        std::size_t best = m;
        double bestv = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double v = dot(x, A[i]);
            if (v < bestv) { bestv = v; best = i; }
        }
        // Wolfe criterion with internal slack well inside dist_tol
        if (bestv >= xx - 1e-12 * (1.0 + xx)) break;
        if (std::find(corral.begin(), corral.end(), best) != corral.end())
            break;  // numerical stall; current x already near-optimal
        corral.push_back(best);
        lambda.push_back(0.0);

        // minor cycle
        for (int minor = 0; minor < int(2 * m + 8); ++minor) {
            std::vector<Vector> pts;
            pts.reserve(corral.size());
            for (std::size_t idx : corral) pts.push_back(A[idx]);
            Vector alpha;
            if (!affine_minimizer(pts, alpha)) {
                // affinely dependent corral: drop the newest point
                corral.pop_back();
                lambda.pop_back();
                rebuild(x);
                break;
            }
            bool interior = true;
            for (double a : alpha)
                if (a < 1e-12) { interior = false; break; }
            if (interior) {
                lambda = alpha;
                rebuild(x);
                break;
            }
            // step toward the affine minimizer until a weight vanishes
            double theta = 1.0;
            for (std::size_t k = 0; k < corral.size(); ++k)
                if (alpha[k] < 1e-12 && lambda[k] > alpha[k])
                    theta = std::min(theta, lambda[k] / (lambda[k] - alpha[k]));
            for (std::size_t k = 0; k < corral.size(); ++k)
                lambda[k] = (1.0 - theta) * lambda[k] + theta * alpha[k];
            for (std::size_t k = corral.size(); k-- > 0;) {
                if (lambda[k] <= 1e-12) {
                    corral.erase(corral.begin() + long(k));
                    lambda.erase(lambda.begin() + long(k));
                }
            }
            if (corral.empty()) {  // should not happen; restart from scratch
                corral = {start};
                lambda = {1.0};
            }
            rebuild(x);
        }
        if (iter == cap - 1)
            throw NumericalError("min_norm_point: iteration cap exceeded");
    }

    // normalize weights and assemble result
    double ls = 0.0;
    for (double l : lambda) ls += l;
    if (ls > 0)
        for (double& l : lambda) l /= ls;
    rebuild(x);

    MinNormResult r;
    r.point = x;
    r.distance = norm(x);
    r.weights.assign(m, 0.0);
    for (std::size_t k = 0; k < corral.size(); ++k) r.weights[corral[k]] = lambda[k];
    (void)tol;
    return r;
}

Vector ConvexPiece::project(const Vector& x) const {
    if (const auto* h = std::get_if<Halfspace>(&shape)) {
        const double viol = dot(h->a, x) - h->b;
        if (viol <= 0) return x;
        return sub(x, scale(h->a, viol / dot(h->a, h->a)));
    }
    if (const auto* b = std::get_if<Ball>(&shape)) {
        Vector d = sub(x, b->center);
        const double nd = norm(d);
        if (nd <= b->radius) return x;
        return add(b->center, scale(d, b->radius / nd));
    }
    const auto& iv = std::get<Interval>(shape);
    Vector y = x;
    y[iv.coord] = std::clamp(y[iv.coord], iv.lo, iv.hi);
    return y;
}

bool ConvexPiece::contains(const Vector& x, double tol) const {
    if (const auto* h = std::get_if<Halfspace>(&shape))
        return dot(h->a, x) <= h->b + tol;
    if (const auto* b = std::get_if<Ball>(&shape))
        return norm(sub(x, b->center)) <= b->radius + tol;
    const auto& iv = std::get<Interval>(shape);
    return x[iv.coord] >= iv.lo - tol && x[iv.coord] <= iv.hi + tol;
}

std::size_t ConvexPiece::dim_or_zero() const {
    if (const auto* h = std::get_if<Halfspace>(&shape)) return h->a.size();
    if (const auto* b = std::get_if<Ball>(&shape)) return b->center.size();
    return 0;
}

std::pair<Vector, double> project_intersection(
    const std::vector<ConvexPiece>& pieces, const Vector& x,
    const Tolerances& tol) {
    if (pieces.empty()) throw InputError("project_intersection: no pieces");
    for (const auto& pc : pieces) {
        const std::size_t d = pc.dim_or_zero();
        if (d != 0 && d != x.size())
            throw InputError("project_intersection: dimension mismatch");
    }

    Vector p = x;
    std::vector<Vector> corr(pieces.size(), Vector(x.size(), 0.0));
    const double stop = 1e-15 * (1.0 + norm(x));
    const int cap = 100000;
    for (int cycle = 0; cycle < cap; ++cycle) {
        double moved = 0.0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            Vector z = add(p, corr[i]);
            Vector y = pieces[i].project(z);
            corr[i] = sub(z, y);
            moved = std::max(moved, norm(sub(y, p)));
            p = std::move(y);
        }
        if (moved <= stop) break;
    }
    bool feas = true;
    for (const auto& pc : pieces)
        if (!pc.contains(p, tol.dist_tol)) { feas = false; break; }
    if (!feas)
        throw NumericalError(
            "project_intersection: no convergence (intersection likely empty)");
    return {p, norm(sub(x, p))};
}

}  // namespace ebmod
