#pragma once

#include <string>

#include "json.hpp"

#include "ebmod/estimator.hpp"

namespace ebmod {

using Json = nlohmann::ordered_json;

// Fixed 12-significant-digit float formatting so identical runs emit
// byte-identical reports.
std::string format_real(double v);

const char* provenance_name(Provenance p);

// A quantity tagged with its provenance.
Json tagged(double value, bool finite, Provenance p);
Json to_json(const Vector& v);
Json to_json(const MinNormResult& r);
Json to_json(const Face& f);
Json to_json(const FaceCollection& c);
Json to_json(const EndSetDistance& d);
Json to_json(const ShellProfile& p);
Json to_json(const LowerEstimate& e);
Json to_json(const SandwichReport& r);
Json to_json(const IndexCollection& c);
Json to_json(const ModulusResult& r);
Json to_json(const RegularityProbe& p);

// FNV-1a digest of the raw input bytes, hex-encoded.
std::string input_digest(const std::string& bytes);

// Top-level report skeleton: command echo, digest, stable key order.
Json make_report(const std::string& command, const std::string& digest);

// Serializes with the fixed float formatting applied to every number
// stored through tagged()/to_json() (they pre-format to strings).
std::string serialize(const Json& report);

}  // namespace ebmod
