#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "barron/measure.hpp"
#include "barron/poly_repu.hpp"
#include "barron/pushforward.hpp"
#include "barron/spectral.hpp"

namespace barron {

using json = nlohmann::ordered_json;

json to_json(const Activation& activation);
/// Builtins only; "custom" is rejected with kUnknownActivation.
Activation activation_from_json(const json& j);

/// {"activation": {...}, "d": int, "atoms": [{"w": [...], "b": f, "mass": f}]}
json to_json(const ShallowNet& net);
ShallowNet net_from_json(const json& j);

/// {"d": int, "atoms": [...]}; an "activation" member is ignored, so net files
/// are accepted too.
json to_json(const DiscreteMeasure& measure);
DiscreteMeasure measure_from_json(const json& j);

/// {"d": int, "s": int, "terms": [{"alpha": [int...], "c": f}]}
json to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const json& j);

/// {"d": int, "terms": [{"xi": [f...], "re": f, "im": f}]}
json to_json(const SpectralRep& rep);
SpectralRep spectral_from_json(const json& j);

json to_json(const NormReport& report);
NormReport norm_from_json(const json& j);

json to_json(const QuadratureSpec& quad);

/// {"source_norm", "target_norm", "constant", "slack", "quadrature", "notes", ...}
json to_json(const EmbeddingCertificate& cert);
EmbeddingCertificate certificate_from_json(const json& j);

json to_json(const BasisPairs& pairs);

std::string to_string(NormKind kind);
std::string to_string(PairScale scale);
PairScale parse_pair_scale(const std::string& name);

json read_json_file(const std::string& path);
/// Writes dump(j) plus a trailing newline.
void write_json_file(const std::string& path, const json& j);
/// Two-space indented text; doubles round-trip exactly.
std::string dump(const json& j);

}  // namespace barron
