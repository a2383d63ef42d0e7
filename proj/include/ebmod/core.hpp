#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebmod {

using Vector = std::vector<double>;

// Thrown on malformed inputs (dimension mismatch, NaN coordinates, bad schema).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver exhausts its iteration budget.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a request exceeds a hard capacity limit (e.g. exhaustive
// face enumeration past the subset-count cutoff).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double eq_tol = 1e-9;      // equality of reals
    double active_tol = 1e-8;  // active-set membership
    double lp_margin = 1e-7;   // strict-inequality certificates
    double dist_tol = 1e-6;    // iterative solver stop

    void validate() const;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Vector& a, double s);
bool all_finite(const Vector& a);

void require_dim(const Vector& v, std::size_t dim, const char* what);

// Finite generator set A of the polytope co A.  Exact duplicates are
// removed on construction; labels, when given, follow their points.
class PointSet {
  public:
    explicit PointSet(std::vector<Vector> points,
                      std::vector<std::string> labels = {});

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    const Vector& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Vector>& points() const { return points_; }
    const std::vector<std::string>& labels() const { return labels_; }

  private:
    std::vector<Vector> points_;
    std::vector<std::string> labels_;
    std::size_t dim_ = 0;
};

// Compact convex body given by a membership predicate and a bounding
// radius.  Convexity is the caller's contract; construction spot-checks
// it by sampling midpoints of member pairs.
struct BodyOracle {
    std::size_t dim = 0;
    std::function<bool(const Vector&)> member;
    double radius_bound = 0.0;
    bool contains_origin = false;

    void spot_check_convexity(unsigned seed = 1, int pairs = 100) const;
};

struct SupportResult {
    double value = 0.0;
    std::vector<std::size_t> argmax_indices;
};

// sigma_{co A}(w) = max_i <a_i, w> together with the argmax face indices
// (relative tolerance eq_tol*(1+|value|)).
SupportResult support(const PointSet& A, const Vector& w,
                      const Tolerances& tol = {});

// Generator set of C' = co(C u {0}): appends the origin unless present.
PointSet augment_with_origin(const PointSet& A);

}  // namespace ebmod
