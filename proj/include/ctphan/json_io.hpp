#pragma once

#include <string>

#include "ctphan/amalgam.hpp"

#include "json.hpp"

namespace ctphan {

/// Parse errors map to CLI exit code 3.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Diagram JSON:
///   {"v":1, "q":int, "vertices":[int], "edges":[{"i","j","type","head"}]}
/// "head" names the G_1 / q^2-side endpoint (required for C2/2A3, optional
/// and checked for A2).  Unknown keys are rejected.  `require_version`
/// controls whether the top-level "v" must be present (file root) or is
/// optional (nested object).
Diagram diagram_from_json(const nlohmann::json& j, bool require_version);
nlohmann::json diagram_to_json(const Diagram& d);

/// Amalgam JSON:
///   {"v":1, "kind":"ct"|"phan", "diagram":<diagram>,
///    "delta":[{"from","to","t":[coords],"r","s"}]}
/// "s" is optional for Phan entries and must be 0 when present.
AmalgamSpec amalgam_from_json(const nlohmann::json& j);
nlohmann::json amalgam_to_json(const AmalgamSpec& spec);

/// KappaClass JSON: {"v":1,"kind","q","diagram_hash","edges":[{"i","j","r","s"}]}
nlohmann::json kappa_to_json(const KappaClass& k);

nlohmann::json witness_to_json(const AmalgamSpec& spec, const AmalgamWitness& w);

/// Load + parse helpers (throw ParseError on malformed input).
nlohmann::json load_json_file(const std::string& path);

}  // namespace ctphan
