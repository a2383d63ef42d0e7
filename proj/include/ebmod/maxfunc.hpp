#pragma once

#include <variant>

#include "ebmod/core.hpp"
#include "ebmod/endset.hpp"
#include "ebmod/parallel.hpp"
#include "ebmod/sampling.hpp"
#include "ebmod/solvers.hpp"

namespace ebmod {

struct AffinePiece {  // <a, x> - b
    Vector a;
    double b = 0.0;
};

struct QuadraticPiece {  // x^T Q x + <b, x> + c
    std::vector<Vector> Q;  // symmetric
    Vector b;
    double c = 0.0;
};

struct SmoothPiece {
    std::variant<AffinePiece, QuadraticPiece> form;

    std::size_t dim() const;
    double eval(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    // Checks Q symmetry and the analytic gradient against central finite
    // differences at 5 seeded random points (rel. err <= 1e-5).
    void validate(unsigned seed = 7) const;
};

class MaxFunction {
  public:
    explicit MaxFunction(std::vector<SmoothPiece> pieces);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return pieces_.size(); }
    const SmoothPiece& piece(std::size_t i) const { return pieces_[i]; }

    double eval(const Vector& x) const;

  private:
    std::vector<SmoothPiece> pieces_;
    std::size_t dim_ = 0;
};

// { i : f_i(x) >= phi(x) - tol*(1+|phi(x)|) }
std::vector<std::size_t> active_set(const MaxFunction& phi, const Vector& x,
                                    double tol);
inline std::vector<std::size_t> active_set(const MaxFunction& phi,
                                           const Vector& x,
                                           const Tolerances& tol = {}) {
    return active_set(phi, x, tol.active_tol);
}

struct Subdifferential {
    PointSet gradients;  // deduplicated gradients of the active pieces
    // piece indices mapped onto positions in `gradients`
    std::vector<std::vector<std::size_t>> pieces_per_point;
};

// partial phi(x) = co{ grad f_i(x) : i active } (hull implied downstream).
Subdifferential subdifferential(const MaxFunction& phi, const Vector& x,
                                const Tolerances& tol = {});

struct SampleConfig {
    ShellConfig shells;
    std::size_t directions = 256;
    unsigned seed = 0;
};

struct LimitingCollection {
    std::vector<std::vector<std::size_t>> index_sets;  // sorted
    std::vector<std::vector<double>> radii_seen;       // per set
    bool exhaustive = false;  // always false: shell/direction sampling
};

// Sampled stand-in for the limiting active collection: active sets that
// persist through the last ceil(m/3) shells along some direction, over
// points with phi > 0.
LimitingCollection limiting_collection(const MaxFunction& phi,
                                       const Vector& xbar,
                                       const SampleConfig& cfg = {},
                                       const Tolerances& tol = {},
                                       Exec exec = Exec::Parallel);

struct LowerEstimate {
    double value = 0.0;
    bool finite = false;  // false: no positive-phi samples found
    std::vector<std::size_t> witness_set;
    MinNormResult witness;
    Vector certificate_direction;  // p/||p|| when value > 0
    bool sampled = true;
};

// d(0, union over collected sets of co{grad f_i(xbar)}); gradients taken
// at xbar.
LowerEstimate lower_estimate(const MaxFunction& phi, const Vector& xbar,
                             const SampleConfig& cfg = {},
                             const Tolerances& tol = {},
                             Exec exec = Exec::Parallel);

struct ExposedCollection {
    FaceCollection faces;                            // over deduped gradients
    std::vector<std::vector<std::size_t>> piece_sets;  // faces as piece indices
};

// The exposed-face collection of the subdifferential at xbar.
ExposedCollection exposed_collection(const MaxFunction& phi, const Vector& xbar,
                                     const Tolerances& tol = {},
                                     Exec exec = Exec::Parallel);

// d(0, es(partial phi(xbar))): the upper estimate.
EndSetDistance upper_estimate(const MaxFunction& phi, const Vector& xbar,
                              const Tolerances& tol = {},
                              Exec exec = Exec::Parallel);

}  // namespace ebmod
