#pragma once

#include <json.hpp>

#include "dynper/equivalence.hpp"
#include "dynper/morphology.hpp"
#include "dynper/pairing.hpp"
#include "dynper/path_oracle.hpp"

namespace dynper {

using Json = nlohmann::ordered_json;

/// Infinite values are written as the string "inf".
Json number_to_json(double value);

/// [{min_index, saddle_index, birth, death, value}, ...]; saddle_index and
/// death are absent for the essential pair.
Json to_json(const std::vector<PersistencePair>& pairs);
std::vector<PersistencePair> pairs_from_json(const Json& json);

Json to_json(VertexId minimum, const DynamicsResult& result);
Json to_json(const std::vector<std::pair<double, double>>& diagram);
Json to_json(const GranulometricCurve& curve);
/// [{"edge": [u, v], "value": s}, ...]
Json to_json(const SaliencyMap& map);
Json to_json(const GeneratorSpec& spec);
Json to_json(const EquivalenceReport& report);
Json to_json(const ScalarField& field);

} // namespace dynper
