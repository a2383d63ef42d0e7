#include "ebmod/problemfile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ebmod {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError("problem file: field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing");
    return *it;
}

double as_real(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "non-finite number");
    return v;
}

Vector as_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
    Vector v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(as_real(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

SmoothPiece parse_piece(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string kind = field(j, path, "kind").get<std::string>();
    if (kind == "affine") {
        AffinePiece p;
        p.a = as_vector(field(j, path, "a"), path + "/a");
        p.b = as_real(field(j, path, "b"), path + "/b");
        return {std::move(p)};
    }
    if (kind == "quadratic") {
        QuadraticPiece p;
        const json& q = field(j, path, "Q");
        if (!q.is_array()) fail(path + "/Q", "expected a matrix");
        for (std::size_t i = 0; i < q.size(); ++i)
            p.Q.push_back(as_vector(q[i], path + "/Q[" + std::to_string(i) + "]"));
        p.b = as_vector(field(j, path, "b"), path + "/b");
        p.c = as_real(field(j, path, "c"), path + "/c");
        return {std::move(p)};
    }
    fail(path + "/kind", "unknown piece kind '" + kind + "'");
}

std::pair<Vector, double> parse_row(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object {a, b}");
    return {as_vector(field(j, path, "a"), path + "/a"),
            as_real(field(j, path, "b"), path + "/b")};
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
    Tolerances t;
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const double v = as_real(it.value(), path + "/" + k);
        if (k == "eq_tol") t.eq_tol = v;
        else if (k == "active_tol") t.active_tol = v;
        else if (k == "lp_margin") t.lp_margin = v;
        else if (k == "dist_tol") t.dist_tol = v;
        else fail(path + "/" + k, "unknown tolerance");
    }
    t.validate();
    return t;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("problem file: ") + e.what());
    }
    if (!j.is_object()) throw InputError("problem file: top level must be an object");

    ProblemFile p;
    const json& sv = field(j, "", "schema_version");
    if (!sv.is_number_integer()) fail("schema_version", "expected an integer");
    p.schema_version = sv.get<int>();
    if (p.schema_version != 1)
        fail("schema_version", "unsupported version " + std::to_string(p.schema_version));

    const std::string kind = field(j, "", "kind").get<std::string>();
    if (kind == "point_set") {
        p.kind = ProblemFile::Kind::PointSet;
        const json& pts = field(j, "", "points");
        if (!pts.is_array() || pts.empty()) fail("points", "expected a nonempty array");
        for (std::size_t i = 0; i < pts.size(); ++i)
            p.points.push_back(as_vector(pts[i], "points[" + std::to_string(i) + "]"));
        if (j.contains("labels")) {
            const json& lab = j["labels"];
            if (!lab.is_array() || lab.size() != pts.size())
                fail("labels", "expected an array matching points");
            for (const auto& l : lab) p.labels.push_back(l.get<std::string>());
        }
    } else if (kind == "max_function") {
        p.kind = ProblemFile::Kind::MaxFunction;
        const json& pieces = field(j, "", "pieces");
        if (!pieces.is_array() || pieces.empty())
            fail("pieces", "expected a nonempty array");
        for (std::size_t i = 0; i < pieces.size(); ++i)
            p.pieces.push_back(
                parse_piece(pieces[i], "pieces[" + std::to_string(i) + "]"));
    } else if (kind == "linear_system_finite") {
        p.kind = ProblemFile::Kind::LinearSystemFinite;
        const json& rows = field(j, "", "rows");
        if (!rows.is_array() || rows.empty()) fail("rows", "expected a nonempty array");
        for (std::size_t i = 0; i < rows.size(); ++i)
            p.rows.push_back(parse_row(rows[i], "rows[" + std::to_string(i) + "]"));
    } else if (kind == "linear_system_curve") {
        p.kind = ProblemFile::Kind::LinearSystemCurve;
        if (j.contains("curve")) {
            p.curve_name = j["curve"].get<std::string>();
            if (p.curve_name != "circle-weighted" && p.curve_name != "circle-unit")
                fail("curve", "unknown named curve '" + p.curve_name + "'");
        } else {
            const json& tab = field(j, "", "table");
            if (!tab.is_array() || tab.size() < 2)
                fail("table", "expected at least 2 samples");
            for (std::size_t i = 0; i < tab.size(); ++i) {
                const std::string path = "table[" + std::to_string(i) + "]";
                const json& e = tab[i];
                if (!e.is_object()) fail(path, "expected an object {t, a, b}");
                p.curve_table.push_back(
                    {as_real(field(e, path, "t"), path + "/t"),
                     {as_vector(field(e, path, "a"), path + "/a"),
                      as_real(field(e, path, "b"), path + "/b")}});
            }
            for (std::size_t i = 1; i < p.curve_table.size(); ++i)
                if (p.curve_table[i].first <= p.curve_table[i - 1].first)
                    fail("table", "t values must be strictly increasing");
        }
        if (j.contains("t_range")) {
            const Vector r = as_vector(j["t_range"], "t_range");
            if (r.size() != 2 || r[0] >= r[1]) fail("t_range", "expected [t0, t1] with t0 < t1");
            p.t0 = r[0];
            p.t1 = r[1];
        } else if (!p.curve_table.empty()) {
            p.t0 = p.curve_table.front().first;
            p.t1 = p.curve_table.back().first;
        } else {
            fail("t_range", "missing (required with a named curve)");
        }
        if (j.contains("grid")) {
            if (!j["grid"].is_number_unsigned() || j["grid"].get<std::size_t>() < 8)
                fail("grid", "expected an integer >= 8");
            p.grid = j["grid"].get<std::size_t>();
        }
    } else if (kind == "builtin") {
        p.kind = ProblemFile::Kind::Builtin;
        p.builtin_name = field(j, "", "name").get<std::string>();
    } else {
        fail("kind", "unknown kind '" + kind + "'");
    }

    if (j.contains("base_point")) p.base_point = as_vector(j["base_point"], "base_point");
    if (j.contains("tolerances"))
        p.tolerances = parse_tolerances(j["tolerances"], "tolerances");
    return p;
}

ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

nlohmann::ordered_json emit_problem(const ProblemFile& p) {
    nlohmann::ordered_json j;
    j["schema_version"] = p.schema_version;
    switch (p.kind) {
        case ProblemFile::Kind::PointSet: {
            j["kind"] = "point_set";
            j["points"] = p.points;
            if (!p.labels.empty()) j["labels"] = p.labels;
            break;
        }
        case ProblemFile::Kind::MaxFunction: {
            j["kind"] = "max_function";
            auto arr = nlohmann::ordered_json::array();
            for (const auto& piece : p.pieces) {
                nlohmann::ordered_json pj;
                if (const auto* a = std::get_if<AffinePiece>(&piece.form)) {
                    pj["kind"] = "affine";
                    pj["a"] = a->a;
                    pj["b"] = a->b;
                } else {
                    const auto& q = std::get<QuadraticPiece>(piece.form);
                    pj["kind"] = "quadratic";
                    pj["Q"] = q.Q;
                    pj["b"] = q.b;
                    pj["c"] = q.c;
                }
                arr.push_back(std::move(pj));
            }
            j["pieces"] = std::move(arr);
            break;
        }
        case ProblemFile::Kind::LinearSystemFinite: {
            j["kind"] = "linear_system_finite";
            auto arr = nlohmann::ordered_json::array();
            for (const auto& [a, b] : p.rows)
                arr.push_back({{"a", a}, {"b", b}});
            j["rows"] = std::move(arr);
            break;
        }
        case ProblemFile::Kind::LinearSystemCurve: {
            j["kind"] = "linear_system_curve";
            if (!p.curve_name.empty()) {
                j["curve"] = p.curve_name;
            } else {
                auto arr = nlohmann::ordered_json::array();
                for (const auto& [t, ab] : p.curve_table)
                    arr.push_back({{"t", t}, {"a", ab.first}, {"b", ab.second}});
                j["table"] = std::move(arr);
            }
            j["t_range"] = Vector{p.t0, p.t1};
            j["grid"] = p.grid;
            break;
        }
        case ProblemFile::Kind::Builtin: {
            j["kind"] = "builtin";
            j["name"] = p.builtin_name;
            break;
        }
    }
    if (p.base_point) j["base_point"] = *p.base_point;
    if (p.tolerances) {
        nlohmann::ordered_json t;
        t["eq_tol"] = p.tolerances->eq_tol;
        t["active_tol"] = p.tolerances->active_tol;
        t["lp_margin"] = p.tolerances->lp_margin;
        t["dist_tol"] = p.tolerances->dist_tol;
        j["tolerances"] = std::move(t);
    }
    return j;
}

PointSet to_point_set(const ProblemFile& p) {
    if (p.kind != ProblemFile::Kind::PointSet)
        throw InputError("expected a point_set problem");
    return PointSet(p.points, p.labels);
}

Scenario to_scenario(const ProblemFile& p) {
    switch (p.kind) {
        case ProblemFile::Kind::Builtin:
            return make_builtin(p.builtin_name);
        case ProblemFile::Kind::MaxFunction: {
            Scenario s;
            s.kind = Scenario::Kind::MaxFunc;
            s.phi = MaxFunction(p.pieces);
            if (!p.base_point) throw InputError("max_function problem needs base_point");
            s.base_point = *p.base_point;
            // level set [phi <= 0] as an intersection of projectable pieces
            for (const auto& piece : p.pieces) {
                if (const auto* a = std::get_if<AffinePiece>(&piece.form)) {
                    s.level_pieces.push_back({Halfspace{a->a, a->b}});
                    continue;
                }
                const auto& q = std::get<QuadraticPiece>(piece.form);
                const std::size_t n = q.b.size();
                const double alpha = q.Q[0][0];
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (std::fabs(q.Q[i][j] - (i == j ? alpha : 0.0)) > 1e-12 ||
                            alpha <= 0)
                            throw InputError(
                                "quadratic piece level sets are supported only "
                                "for positive multiples of the identity");
                Ball ball;
                ball.center = scale(q.b, -0.5 / alpha);
                const double r2 = dot(ball.center, ball.center) - q.c / alpha;
                if (r2 <= 0)
                    throw InputError("quadratic piece has an empty level set");
                ball.radius = std::sqrt(r2);
                s.level_pieces.push_back({std::move(ball)});
            }
            return s;
        }
        case ProblemFile::Kind::LinearSystemFinite: {
            Scenario s;
            s.kind = Scenario::Kind::LinSys;
            s.sys = LinearSystem(FiniteSystem{p.rows});
            if (!p.base_point)
                throw InputError("linear_system problem needs base_point");
            s.base_point = *p.base_point;
            return s;
        }
        case ProblemFile::Kind::LinearSystemCurve: {
            if (!p.curve_name.empty()) {
                Scenario s = make_builtin(p.curve_name);
                if (p.base_point) s.base_point = *p.base_point;
                return s;
            }
            Scenario s;
            s.kind = Scenario::Kind::LinSys;
            CurveSystem c;
            c.t0 = p.t0;
            c.t1 = p.t1;
            c.grid = p.grid;
            // piecewise-linear interpolation of the sample table
            auto table = p.curve_table;
            c.coeff = [table](double t) {
                auto it = std::lower_bound(
                    table.begin(), table.end(), t,
                    [](const auto& e, double v) { return e.first < v; });
                if (it == table.begin()) return it->second;
                if (it == table.end()) return table.back().second;
                const auto& hi = *it;
                const auto& lo = *(it - 1);
                const double w = (t - lo.first) / (hi.first - lo.first);
                Vector a = add(scale(lo.second.first, 1.0 - w),
                               scale(hi.second.first, w));
                const double b =
                    (1.0 - w) * lo.second.second + w * hi.second.second;
                return std::make_pair(std::move(a), b);
            };
            s.sys = LinearSystem(std::move(c));
            if (!p.base_point)
                throw InputError("linear_system problem needs base_point");
            s.base_point = *p.base_point;
            return s;
        }
        case ProblemFile::Kind::PointSet:
            throw InputError("point_set problems drive endset queries, not analyze");
    }
    throw InputError("unreachable problem kind");
}

}  // namespace ebmod
