#pragma once

#include <variant>

#include "ebmod/core.hpp"
#include "ebmod/parallel.hpp"
#include "ebmod/solvers.hpp"

namespace ebmod {

// One certified exposed face: generator indices, the supporting direction
// w (scaled so <a,w> = 1 on the face), and the certified strict margin.
struct Face {
    std::vector<std::size_t> indices;  // sorted
    Vector witness;
    double margin = 0.0;
};

struct FaceCollection {
    std::vector<Face> faces;            // sorted lexicographically by indices
    bool exhaustive = true;             // false for sampled collections
};

struct FaceMode {
    enum Kind { Enumerate, Sample } kind = Enumerate;
    std::size_t directions = 1024;  // sample mode
    unsigned seed = 0;
};

// The collection of exposed faces of co A with positive support value,
// each certified by the margin LP (<a,w> = 1 on the face, <a,w> <= 1 - s
// off it, s > lp_margin).  Enumerate mode requires |A| <= 12.
FaceCollection face_collection(const PointSet& A, const FaceMode& mode = {},
                               const Tolerances& tol = {},
                               Exec exec = Exec::Parallel);

// Re-checks a stored certificate against its point set.
bool verify_face(const PointSet& A, const Face& f, const Tolerances& tol = {});

struct EndSetDistance {
    double distance = 0.0;  // +inf when the face collection is empty
    bool finite = false;
    Face face;              // minimizing face (when finite)
    MinNormResult witness;  // min-norm point of that face (when finite)
    bool exhaustive = true;
};

// d(0, es(co A)) = min over faces of d(0, co A').
EndSetDistance end_set_distance(const PointSet& A, const FaceMode& mode = {},
                                const Tolerances& tol = {},
                                Exec exec = Exec::Parallel);

struct GaugeValue {
    double value = 0.0;
    bool finite = true;
    enum Method { Lp, Bisection } method = Lp;
};

// Gauge of x w.r.t. co(A u {0}) (LP path) or w.r.t. the oracle body
// (bisection along the ray through x).
GaugeValue gauge(const PointSet& A, const Vector& x, const Tolerances& tol = {});
GaugeValue gauge(const BodyOracle& body, const Vector& x,
                 const Tolerances& tol = {});

// es(C) membership: |gauge - 1| <= active_tol.
bool end_set_member(const PointSet& A, const Vector& x, const Tolerances& tol = {});
bool end_set_member(const BodyOracle& body, const Vector& x,
                    const Tolerances& tol = {});

}  // namespace ebmod
