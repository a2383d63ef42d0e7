#pragma once

#include <functional>
#include <optional>

#include "ebmod/core.hpp"
#include "ebmod/endset.hpp"
#include "ebmod/maxfunc.hpp"
#include "ebmod/parallel.hpp"

namespace ebmod {

struct FiniteSystem {
    std::vector<std::pair<Vector, double>> rows;  // <a, x> <= b
};

struct CurveSystem {
    double t0 = 0.0, t1 = 1.0;
    std::size_t grid = 4096;
    std::function<std::pair<Vector, double>(double)> coeff;  // t -> (a_t, b_t)
    // Optional exact active-set solver; returns nullopt to fall back to
    // the clustering path.
    std::function<std::optional<std::vector<double>>(const Vector&)>
        analytic_active;
};

class LinearSystem {
  public:
    explicit LinearSystem(FiniteSystem sys);
    explicit LinearSystem(CurveSystem sys);

    bool is_finite() const { return std::holds_alternative<FiniteSystem>(sys_); }
    const FiniteSystem& finite() const { return std::get<FiniteSystem>(sys_); }
    const CurveSystem& curve() const { return std::get<CurveSystem>(sys_); }
    std::size_t dim() const { return dim_; }

    // Precomputed (t, a_t, b_t) grid for curve systems.
    const std::vector<double>& grid_ts() const { return grid_ts_; }
    std::pair<Vector, double> coeff_at(double t) const;

  private:
    std::variant<FiniteSystem, CurveSystem> sys_;
    std::size_t dim_ = 0;
    std::vector<double> grid_ts_;
    std::vector<Vector> grid_a_;
    std::vector<double> grid_b_;
    friend double residual(const LinearSystem&, const Vector&, Exec);
    friend struct ResidualDetail;
};

// phi(x) = max_t <a_t, x> - b_t.  Curve systems take the grid max and
// refine by golden section around the argmax.
double residual(const LinearSystem& sys, const Vector& x,
                Exec exec = Exec::Parallel);

struct ActiveIndices {
    std::vector<std::size_t> finite;  // finite model: row indices
    std::vector<double> curve_ts;     // curve model: representatives / roots
    bool analytic = false;
};

ActiveIndices active_indices(const LinearSystem& sys, const Vector& x,
                             double tol);
inline ActiveIndices active_indices(const LinearSystem& sys, const Vector& x,
                                    const Tolerances& tol = {}) {
    return active_indices(sys, x, tol.active_tol);
}

struct IndexCollection {
    // one entry per certified face: the t-values (curve) or row indices
    // (finite) whose coefficient vectors span the face
    std::vector<std::vector<double>> t_sets;
    std::vector<std::vector<std::size_t>> index_sets;
    FaceCollection faces;          // over the merged coefficient vectors
    std::vector<Vector> generators;
};

IndexCollection index_collection(const LinearSystem& sys, const Vector& x,
                                 const Tolerances& tol = {},
                                 Exec exec = Exec::Parallel);

struct ModulusResult {
    double value = 0.0;  // +inf when the collection is empty
    bool finite = false;
    IndexCollection collection;
    MinNormResult witness;
};

// d(0, union over T' of co{a_t : t in T'}): the exact error bound modulus
// under the active-cone regularity condition, an upper estimate otherwise.
ModulusResult modulus_formula(const LinearSystem& sys, const Vector& x,
                              const Tolerances& tol = {},
                              Exec exec = Exec::Parallel);

enum class ProbeKind { LocallyPolyhedral, Acq, Eta };

struct RegularityProbe {
    ProbeKind kind = ProbeKind::LocallyPolyhedral;
    std::size_t samples = 0;
    std::vector<double> epsilons;
    bool counterexample_found = false;
    Vector direction;  // counterexample direction (in the active cone)
    Vector point;      // infeasible probe point
    bool self_verified = false;
};

// Falsifier probe: samples directions in the active cone and tests local
// feasibility.  "No counterexample" is not a proof.
RegularityProbe regularity_probe(const LinearSystem& sys, const Vector& x,
                                 ProbeKind kind, std::size_t samples,
                                 std::vector<double> epsilons, unsigned seed,
                                 const Tolerances& tol = {},
                                 Exec exec = Exec::Parallel);

// Max-affine function induced by the system (finite rows, or the curve
// discretized on its grid).
MaxFunction to_max_function(const LinearSystem& sys);

}  // namespace ebmod
