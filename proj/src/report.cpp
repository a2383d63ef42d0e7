#include "ebmod/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace ebmod {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Computed: return "computed";
        case Provenance::Sampled: return "sampled";
        case Provenance::Fixture: return "fixture";
    }
    return "computed";
}

Json tagged(double value, bool finite, Provenance p) {
    Json j;
    j["value"] = finite ? format_real(value) : "inf";
    j["finite"] = finite;
    j["provenance"] = provenance_name(p);
    return j;
}

Json to_json(const Vector& v) {
    Json j = Json::array();
    for (double c : v) j.push_back(format_real(c));
    return j;
}

Json to_json(const MinNormResult& r) {
    Json j;
    j["point"] = to_json(r.point);
    j["distance"] = format_real(r.distance);
    j["weights"] = to_json(r.weights);
    return j;
}

Json to_json(const Face& f) {
    Json j;
    j["indices"] = f.indices;
    j["witness"] = to_json(f.witness);
    j["margin"] = format_real(f.margin);
    return j;
}

Json to_json(const FaceCollection& c) {
    Json j;
    j["exhaustive"] = c.exhaustive;
    Json arr = Json::array();
    for (const Face& f : c.faces) arr.push_back(to_json(f));
    j["faces"] = std::move(arr);
    return j;
}

Json to_json(const EndSetDistance& d) {
    Json j;
    j["distance"] = d.finite ? format_real(d.distance) : "inf";
    j["finite"] = d.finite;
    j["exhaustive"] = d.exhaustive;
    if (d.finite) {
        j["face"] = to_json(d.face);
        j["witness"] = to_json(d.witness);
    }
    return j;
}

Json to_json(const ShellProfile& p) {
    Json j;
    j["radii"] = to_json(p.radii);
    j["shell_min"] = to_json(p.shell_min);
    j["counts"] = p.counts;
    j["tail"] = p.tail;
    j["liminf"] = p.finite ? format_real(p.liminf) : "inf";
    j["finite"] = p.finite;
    j["provenance"] = provenance_name(Provenance::Sampled);
    return j;
}

Json to_json(const LowerEstimate& e) {
    Json j;
    j["value"] = e.finite ? format_real(e.value) : "inf";
    j["finite"] = e.finite;
    j["sampled"] = e.sampled;
    j["witness_set"] = e.witness_set;
    if (e.finite) {
        j["witness"] = to_json(e.witness);
        if (!e.certificate_direction.empty())
            j["certificate_direction"] = to_json(e.certificate_direction);
    }
    return j;
}

Json to_json(const SandwichReport& r) {
    Json j;
    j["lower"] = tagged(r.lower.value, r.lower.finite, r.lower.provenance);
    if (r.lower_detail) j["lower_certificate"] = to_json(*r.lower_detail);
    j["empirical"] = to_json(r.empirical);
    j["upper"] = tagged(r.upper.value, r.upper.finite, r.upper.provenance);
    Json v;
    v["lower_le_empirical"] = r.lower_le_empirical;
    v["empirical_le_upper"] = r.empirical_le_upper;
    v["lower_tight"] = r.lower_tight;
    v["upper_tight"] = r.upper_tight;
    j["verdict"] = std::move(v);
    return j;
}

Json to_json(const IndexCollection& c) {
    Json j;
    Json ts = Json::array();
    for (const auto& s : c.t_sets) ts.push_back(to_json(s));
    j["t_sets"] = std::move(ts);
    j["index_sets"] = c.index_sets;
    j["faces"] = to_json(c.faces);
    Json gens = Json::array();
    for (const auto& g : c.generators) gens.push_back(to_json(g));
    j["generators"] = std::move(gens);
    return j;
}

Json to_json(const ModulusResult& r) {
    Json j;
    j["value"] = r.finite ? format_real(r.value) : "inf";
    j["finite"] = r.finite;
    j["provenance"] = provenance_name(Provenance::Computed);
    j["note"] = "exact modulus under the active-cone regularity condition, "
                "upper estimate otherwise";
    j["collection"] = to_json(r.collection);
    if (r.finite) j["witness"] = to_json(r.witness);
    return j;
}

Json to_json(const RegularityProbe& p) {
    Json j;
    switch (p.kind) {
        case ProbeKind::LocallyPolyhedral: j["kind"] = "locally-polyhedral"; break;
        case ProbeKind::Acq: j["kind"] = "acq"; break;
        case ProbeKind::Eta: j["kind"] = "eta"; break;
    }
    j["samples"] = p.samples;
    j["epsilons"] = to_json(p.epsilons);
    if (p.counterexample_found) {
        j["verdict"] = "counterexample";
        j["direction"] = to_json(p.direction);
        j["point"] = to_json(p.point);
        j["self_verified"] = p.self_verified;
    } else {
        j["verdict"] = "no-counterexample";
        j["note"] = "sampling cannot prove the condition, only falsify it";
    }
    return j;
}

std::string input_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

Json make_report(const std::string& command, const std::string& digest) {
    Json j;
    j["command"] = command;
    j["input_digest"] = digest;
    j["warnings"] = Json::array();
    return j;
}

std::string serialize(const Json& report) {
    return report.dump(2) + "\n";
}

}  // namespace ebmod
