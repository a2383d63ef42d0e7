#include "ebmod/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebmod/sampling.hpp"

namespace ebmod {

namespace {

// Golden-section maximization of g on [lo, hi].
double golden_max(const std::function<double(double)>& g, double lo, double hi,
                  int iters = 90) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = g(c), fd = g(d);
    for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::fabs(b)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(d);
        }
    }
    return std::max({g(lo), g(hi), fc, fd});
}

double golden_argmax(const std::function<double(double)>& g, double lo,
                     double hi, int iters = 90) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = g(c), fd = g(d);
    for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::fabs(b)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(d);
        }
    }
    double best = 0.5 * (a + b);
    double bestv = g(best);
    for (double t : {lo, hi})
        if (g(t) > bestv) { bestv = g(t); best = t; }
    return best;
}

}  // namespace

LinearSystem::LinearSystem(FiniteSystem sys) : sys_(std::move(sys)) {
    const auto& rows = finite().rows;
    if (rows.empty()) throw InputError("LinearSystem: no rows");
    dim_ = rows.front().first.size();
    for (const auto& [a, b] : rows)
        if (a.size() != dim_ || !all_finite(a) || !std::isfinite(b))
            throw InputError("LinearSystem: bad row");
}

LinearSystem::LinearSystem(CurveSystem sys) : sys_(std::move(sys)) {
    const auto& c = curve();
    if (!(c.t0 < c.t1)) throw InputError("LinearSystem: need t0 < t1");
    if (c.grid < 2) throw InputError("LinearSystem: grid too small");
    if (!c.coeff) throw InputError("LinearSystem: missing coefficient function");
    dim_ = c.coeff(c.t0).first.size();
    grid_ts_.resize(c.grid + 1);
    grid_a_.resize(c.grid + 1);
    grid_b_.resize(c.grid + 1);
    for (std::size_t i = 0; i <= c.grid; ++i) {
        const double t =
            c.t0 + (c.t1 - c.t0) * double(i) / double(c.grid);
        auto [a, b] = c.coeff(t);
        if (a.size() != dim_ || !all_finite(a) || !std::isfinite(b))
            throw InputError("LinearSystem: bad curve coefficient");
        grid_ts_[i] = t;
        grid_a_[i] = std::move(a);
        grid_b_[i] = b;
    }
}

std::pair<Vector, double> LinearSystem::coeff_at(double t) const {
    return curve().coeff(t);
}

double residual(const LinearSystem& sys, const Vector& x, Exec exec) {
    require_dim(x, sys.dim(), "residual");
    if (sys.is_finite()) {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : sys.finite().rows)
            v = std::max(v, dot(a, x) - b);
        return v;
    }
    const auto& ts = sys.grid_ts_;
    const std::size_t n = ts.size();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    if (exec == Exec::Parallel && n > 2048) {
        double gbest = best;
        std::size_t garg = 0;
#pragma omp parallel
        {
            double lb = -std::numeric_limits<double>::infinity();
            std::size_t la = 0;
#pragma omp for nowait
            for (long long i = 0; i < (long long)n; ++i) {
                const double v =
                    dot(sys.grid_a_[std::size_t(i)], x) - sys.grid_b_[std::size_t(i)];
                if (v > lb || (v == lb && std::size_t(i) < la)) {
                    lb = v;
                    la = std::size_t(i);
                }
            }
#pragma omp critical
            {
                if (lb > gbest || (lb == gbest && la < garg)) {
                    gbest = lb;
                    garg = la;
                }
            }
        }
        best = gbest;
        arg = garg;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dot(sys.grid_a_[i], x) - sys.grid_b_[i];
            if (v > best) { best = v; arg = i; }
        }
    }
    // refine around the grid argmax using the exact coefficients
    const double lo = ts[arg == 0 ? 0 : arg - 1];
    const double hi = ts[arg + 1 >= n ? n - 1 : arg + 1];
    auto g = [&](double t) {
        auto [a, b] = sys.coeff_at(t);
        return dot(a, x) - b;
    };
    return std::max(best, golden_max(g, lo, hi));
}

ActiveIndices active_indices(const LinearSystem& sys, const Vector& x,
                             double tol) {
    ActiveIndices out;
    const double phi = residual(sys, x);
    const double cut = phi - tol * (1.0 + std::fabs(phi));
    if (sys.is_finite()) {
        const auto& rows = sys.finite().rows;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (dot(rows[i].first, x) - rows[i].second >= cut)
                out.finite.push_back(i);
        return out;
    }
    const auto& c = sys.curve();
    if (c.analytic_active) {
        if (auto roots = c.analytic_active(x)) {
            out.curve_ts = *roots;
            std::sort(out.curve_ts.begin(), out.curve_ts.end());
            out.analytic = true;
            return out;
        }
    }
    // cluster near-active grid points; representative = refined argmax
    const auto& ts = sys.grid_ts();
    const double spacing = ts[1] - ts[0];
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto [a, b] = sys.coeff_at(ts[i]);
        if (dot(a, x) - b >= cut) hits.push_back(i);
    }
    auto g = [&](double t) {
        auto [a, b] = sys.coeff_at(t);
        return dot(a, x) - b;
    };
    std::size_t k = 0;
    while (k < hits.size()) {
        std::size_t e = k;
        while (e + 1 < hits.size() && ts[hits[e + 1]] - ts[hits[e]] <= 2.0 * spacing + 1e-15)
            ++e;
        const double lo = std::max(c.t0, ts[hits[k]] - spacing);
        const double hi = std::min(c.t1, ts[hits[e]] + spacing);
        out.curve_ts.push_back(golden_argmax(g, lo, hi));
        k = e + 1;
    }
    return out;
}

IndexCollection index_collection(const LinearSystem& sys, const Vector& x,
                                 const Tolerances& tol, Exec exec) {
    const ActiveIndices act = active_indices(sys, x, tol);

    // gather coefficient vectors of the active indices
    std::vector<Vector> coeffs;
    std::vector<double> tags;  // t value or row index
    if (sys.is_finite()) {
        for (std::size_t i : act.finite) {
            coeffs.push_back(sys.finite().rows[i].first);
            tags.push_back(double(i));
        }
    } else {
        for (double t : act.curve_ts) {
            coeffs.push_back(sys.coeff_at(t).first);
            tags.push_back(t);
        }
    }
    if (coeffs.empty()) throw InputError("index_collection: x not active anywhere");

    // merge indices whose coefficient vectors coincide within eq_tol
    // (duplicate generators, e.g. a curve closing on itself)
    IndexCollection out;
    std::vector<std::vector<std::size_t>> members;  // per generator
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        bool merged = false;
        for (std::size_t gidx = 0; gidx < out.generators.size(); ++gidx) {
            const double scale_ref = 1.0 + norm(out.generators[gidx]);
            if (norm(sub(coeffs[i], out.generators[gidx])) <= tol.eq_tol * scale_ref) {
                members[gidx].push_back(i);
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.generators.push_back(coeffs[i]);
            members.push_back({i});
        }
    }
    if (out.generators.size() > 12)
        throw CapacityError("index_collection: more than 12 active generators");

    out.faces = face_collection(PointSet(out.generators), {}, tol, exec);
    for (const Face& f : out.faces.faces) {
        std::vector<double> tset;
        std::vector<std::size_t> iset;
        for (std::size_t gidx : f.indices)
            for (std::size_t i : members[gidx]) {
                if (sys.is_finite())
                    iset.push_back(std::size_t(tags[i]));
                else
                    tset.push_back(tags[i]);
            }
        std::sort(tset.begin(), tset.end());
        std::sort(iset.begin(), iset.end());
        out.t_sets.push_back(std::move(tset));
        out.index_sets.push_back(std::move(iset));
    }
    return out;
}

ModulusResult modulus_formula(const LinearSystem& sys, const Vector& x,
                              const Tolerances& tol, Exec exec) {
    ModulusResult out;
    out.collection = index_collection(sys, x, tol, exec);
    out.value = std::numeric_limits<double>::infinity();
    for (const Face& f : out.collection.faces.faces) {
        std::vector<Vector> pts;
        for (std::size_t g : f.indices) pts.push_back(out.collection.generators[g]);
        const MinNormResult mn = min_norm_point(PointSet(std::move(pts)), tol);
        if (!out.finite || mn.distance < out.value) {
            out.finite = true;
            out.value = mn.distance;
            out.witness = mn;
        }
    }
    return out;
}

RegularityProbe regularity_probe(const LinearSystem& sys, const Vector& x,
                                 ProbeKind kind, std::size_t samples,
                                 std::vector<double> epsilons, unsigned seed,
                                 const Tolerances& tol, Exec exec) {
    if (residual(sys, x) > tol.active_tol)
        throw InputError("regularity_probe: x not feasible");
    if (epsilons.empty()) epsilons = {1e-2, 1e-3, 1e-4};
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());

    const ActiveIndices act = active_indices(sys, x, tol);
    std::vector<Vector> active_a;
    if (sys.is_finite()) {
        for (std::size_t i : act.finite)
            active_a.push_back(sys.finite().rows[i].first);
    } else {
        for (double t : act.curve_ts) active_a.push_back(sys.coeff_at(t).first);
    }

    const auto dirs = unit_directions(sys.dim(), samples, seed);
    RegularityProbe out;
    out.kind = kind;
    out.samples = dirs.size();
    out.epsilons = epsilons;

    // per-direction verdict: infeasible step size, 0 = no counterexample
    std::vector<double> bad_eps(dirs.size(), 0.0);
    auto work = [&](std::size_t d) {
        const Vector& w = dirs[d];
        double cone_max = 0.0;
        for (const Vector& a : active_a) cone_max = std::max(cone_max, dot(a, w));
        if (cone_max > tol.eq_tol) return;  // not in the active cone
        // LP/ETA: every cone direction must be locally feasible.
        // ACQ: the cone (= subderivative nonpositivity set) should consist
        // of tangent directions; same sampled falsification test.
        for (double eps : epsilons) {
            // threshold scales with the step so O(eps^2) boundary
            // curvature registers as infeasible
            if (residual(sys, add(x, scale(w, eps)), Exec::Serial) >
                tol.active_tol * eps) {
                bad_eps[d] = eps;
                break;
            }
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long d = 0; d < (long long)dirs.size(); ++d)
            work(std::size_t(d));
    } else {
        for (std::size_t d = 0; d < dirs.size(); ++d) work(d);
    }
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        if (bad_eps[d] == 0.0) continue;
        out.counterexample_found = true;
        out.direction = dirs[d];
        out.point = add(x, scale(dirs[d], bad_eps[d]));
        out.self_verified =
            residual(sys, out.point) > tol.active_tol * bad_eps[d];
        break;
    }
    return out;
}

MaxFunction to_max_function(const LinearSystem& sys) {
    std::vector<SmoothPiece> pieces;
    if (sys.is_finite()) {
        for (const auto& [a, b] : sys.finite().rows)
            pieces.push_back({AffinePiece{a, b}});
    } else {
        const auto& ts = sys.grid_ts();
        for (double t : ts) {
            auto [a, b] = sys.coeff_at(t);
            pieces.push_back({AffinePiece{std::move(a), b}});
        }
    }
    return MaxFunction(std::move(pieces));
}

}  // namespace ebmod
