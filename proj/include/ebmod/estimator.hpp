#pragma once

#include <optional>
#include <string>

#include "ebmod/core.hpp"
#include "ebmod/linsys.hpp"
#include "ebmod/maxfunc.hpp"
#include "ebmod/parallel.hpp"
#include "ebmod/solvers.hpp"

namespace ebmod {

enum class Provenance { Computed, Sampled, Fixture };

struct Scenario {
    enum class Kind { MaxFunc, LinSys, Builtin };
    Kind kind = Kind::MaxFunc;
    std::string name;  // builtin name, empty otherwise
    Vector base_point;

    std::optional<MaxFunction> phi;
    std::vector<ConvexPiece> level_pieces;  // level set of a max function
    std::optional<LinearSystem> sys;

    // builtin hooks
    std::function<double(const Vector&)> value_fn;  // closed-form phi
    std::function<double(const Vector&)> dist_fn;   // closed-form d(x,[phi<=0])
    std::vector<double> extra_radii;  // injected deterministic shell radii
    std::optional<double> pinned_lower;          // fixture lower estimate
    std::optional<PointSet> subdiff_generators;  // fixture subdifferential
    SampleConfig default_cfg;

    void validate(const Tolerances& tol = {}) const;
};

// Built-in scenarios: "stu-war", "max-quad-affine", "circle-weighted",
// "circle-unit".
Scenario make_builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

// Example body for end-set membership queries ("disk-slab").
BodyOracle make_disk_slab_oracle();

double scenario_value(const Scenario& s, const Vector& x);
std::size_t scenario_dim(const Scenario& s);

// d(x, [phi <= 0]): closed form for builtins, Dykstra otherwise.
double level_set_distance(const Scenario& s, const Vector& x,
                          const Tolerances& tol = {});

// Projection onto [phi <= 0] for the piece/discretized paths; the second
// member is the distance.  Lets callers report the discretization error
// of curve systems as the exact residual at the projected point.
std::pair<Vector, double> level_set_projection(const Scenario& s,
                                               const Vector& x,
                                               const Tolerances& tol = {});

struct ShellProfile {
    std::vector<double> radii;      // strictly decreasing (extras merged)
    std::vector<double> shell_min;  // +inf when a shell had no positive sample
    std::vector<std::size_t> counts;
    std::size_t tail = 0;     // window used for the liminf estimate
    double liminf = 0.0;
    bool finite = false;  // false: no positive-phi sample anywhere
};

// liminf of phi(x)/d(x,[phi<=0]) over shrinking shells around base_point.
ShellProfile empirical_ebm(const Scenario& s, const SampleConfig& cfg,
                           const Tolerances& tol = {},
                           Exec exec = Exec::Parallel);
ShellProfile empirical_ebm(const Scenario& s, const Tolerances& tol = {},
                           Exec exec = Exec::Parallel);

struct EstimateValue {
    double value = 0.0;
    bool finite = false;
    Provenance provenance = Provenance::Computed;
};

struct SandwichReport {
    EstimateValue lower;
    ShellProfile empirical;
    EstimateValue upper;
    bool lower_le_empirical = false;
    bool empirical_le_upper = false;
    bool lower_tight = false;  // lower ~ empirical
    bool upper_tight = false;  // empirical ~ upper
    std::optional<LowerEstimate> lower_detail;
};

SandwichReport sandwich_report(const Scenario& s, const SampleConfig& cfg,
                               const Tolerances& tol = {},
                               Exec exec = Exec::Parallel);
SandwichReport sandwich_report(const Scenario& s, const Tolerances& tol = {},
                               Exec exec = Exec::Parallel);

}  // namespace ebmod
