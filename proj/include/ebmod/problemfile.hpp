#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "ebmod/estimator.hpp"

namespace ebmod {

// Parsed problem input.  schema_version 1; unknown kinds and malformed
// payloads are rejected with a field path in the error message.
struct ProblemFile {
    enum class Kind {
        PointSet,
        MaxFunction,
        LinearSystemFinite,
        LinearSystemCurve,
        Builtin
    };

    int schema_version = 1;
    Kind kind = Kind::PointSet;

    std::vector<Vector> points;
    std::vector<std::string> labels;

    std::vector<SmoothPiece> pieces;

    std::vector<std::pair<Vector, double>> rows;

    std::string curve_name;  // named builtin curve, empty for tables
    std::vector<std::pair<double, std::pair<Vector, double>>> curve_table;
    double t0 = 0.0, t1 = 1.0;
    std::size_t grid = 4096;

    std::string builtin_name;

    std::optional<Vector> base_point;
    std::optional<Tolerances> tolerances;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile parse_problem_file(const std::string& path);

// Inverse of parse_problem up to field order.
nlohmann::ordered_json emit_problem(const ProblemFile& p);

// Materializes the analysis scenario a problem describes.
Scenario to_scenario(const ProblemFile& p);
PointSet to_point_set(const ProblemFile& p);

}  // namespace ebmod
