#pragma once

#include <optional>
#include <utility>
#include <variant>

#include "ebmod/core.hpp"

namespace ebmod {

// maximize <objective, z>  s.t.  eq rows <row,z> = rhs, ineq rows <row,z> <= rhs,
// optional per-variable bounds.
struct LpProblem {
    Vector objective;
    std::vector<std::pair<Vector, double>> eq_rows;
    std::vector<std::pair<Vector, double>> ineq_rows;
    std::vector<std::optional<double>> lower_bounds;  // empty or per-variable
    std::vector<std::optional<double>> upper_bounds;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vector z;
    double value = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling rule.
LpResult lp_solve(const LpProblem& p, const Tolerances& tol = {});

struct MinNormResult {
    Vector point;
    double distance = 0.0;
    Vector weights;  // convex-combination coefficients over the input points
};

// Nearest point of co A to the origin (Wolfe's algorithm); certified by
// <point, a_i - point> >= -dist_tol for all generators.
MinNormResult min_norm_point(const PointSet& A, const Tolerances& tol = {});

struct Halfspace {  // <a, x> <= b
    Vector a;
    double b = 0.0;
};
struct Ball {
    Vector center;
    double radius = 0.0;
};
struct Interval {  // lo <= x[coord] <= hi  (either side may be infinite)
    std::size_t coord = 0;
    double lo = 0.0;
    double hi = 0.0;
};

struct ConvexPiece {
    std::variant<Halfspace, Ball, Interval> shape;

    Vector project(const Vector& x) const;
    bool contains(const Vector& x, double tol) const;
    std::size_t dim_or_zero() const;  // 0 for Interval (any ambient dim)
};

// Dykstra's alternating projection onto the intersection of the pieces.
// The intersection must be nonempty (caller contract).
std::pair<Vector, double> project_intersection(
    const std::vector<ConvexPiece>& pieces, const Vector& x,
    const Tolerances& tol = {});

}  // namespace ebmod
