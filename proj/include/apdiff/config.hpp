#pragma once

// JSON system configuration: presets or an explicit scheme, weight,
// deformation and optional modulation.

#include <optional>
#include <string>

#include <json.hpp>

#include "apdiff/apfun.hpp"
#include "apdiff/combs.hpp"
#include "apdiff/cps.hpp"
#include "apdiff/functions.hpp"

namespace apdiff {

using Json = nlohmann::json;

struct SystemConfig {
  Json document;
  CutProjectScheme scheme;
  WeightFunction weight;
  DeformationMap deformation;
  // Torus form of the deformation when it is a trigonometric polynomial.
  std::optional<ApFunction> deformation_torus;
  std::optional<ApFunction> modulation_weight;
  std::optional<ApFunction> modulation_displacement;
  std::optional<IdealCrystal> crystal;
};

struct EffectiveSystem {
  CutProjectScheme scheme;
  WeightFunction weight;
  DeformationMap deformation;
};

// Parse errors become ConfigError with line and column.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

// Throws ConfigError naming the offending field.
SystemConfig load_config(const Json& document);

// Scheme with the modulation folded in through the composed scheme.
EffectiveSystem effective_system(const SystemConfig& config);

// Sorted keys, doubles as %.17g, no whitespace variation.
std::string canonical_dump(const Json& document);

// Literal forms: {"frequencies": [...], "coefficients": [...]},
// {"amp", "freq", "phase", "shape"} tones, {"constant": c}, or an array of these.
std::vector<Term> parse_terms(const Json& literal, int domain_dim, const std::string& where);
ApFunction parse_scalar_ap(const Json& literal, int domain_dim, const std::string& where);
// {"components": [literal, ...]} with one literal per output coordinate.
ApFunction parse_vector_ap(const Json& literal, int domain_dim, int out_dim, const std::string& where);

// The deformation as a function of the physical position of lattice points,
// available when the scheme has no Euclidean internal part.
std::optional<ApFunction> physical_deformation(const SystemConfig& config);

}  // namespace apdiff
