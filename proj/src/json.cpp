#include "dynper/json.hpp"

#include <cmath>
#include <limits>

namespace dynper {

Json number_to_json(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    return value;
}

namespace {

double number_from_json(const Json& json)
{
    if (json.is_string()) {
        const auto& s = json.get_ref<const std::string&>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        throw ParseError("expected a number or \"inf\", got \"" + s + "\"");
    }
    if (!json.is_number())
        throw ParseError("expected a number, got " + json.dump());
    return json.get<double>();
}

} // namespace

Json to_json(const std::vector<PersistencePair>& pairs)
{
    Json out = Json::array();
    for (const PersistencePair& p : pairs) {
        Json item;
        item["min_index"] = p.min_vertex;
        if (p.saddle_vertex)
            item["saddle_index"] = *p.saddle_vertex;
        item["birth"] = p.birth;
        if (!p.essential())
            item["death"] = p.death;
        item["value"] = number_to_json(p.value);
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<PersistencePair> pairs_from_json(const Json& json)
{
    if (!json.is_array())
        throw ParseError("pairs must be a JSON array");
    std::vector<PersistencePair> pairs;
    try {
        for (const Json& item : json) {
            PersistencePair p;
            p.min_vertex = item.at("min_index").get<VertexId>();
            if (item.contains("saddle_index"))
                p.saddle_vertex = item.at("saddle_index").get<VertexId>();
            p.birth = number_from_json(item.at("birth"));
            p.death = item.contains("death") ? number_from_json(item.at("death"))
                                             : std::numeric_limits<double>::infinity();
            p.value = number_from_json(item.at("value"));
            pairs.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed pair: ") + e.what());
    }
    return pairs;
}

Json to_json(VertexId minimum, const DynamicsResult& result)
{
    Json out;
    out["min_index"] = minimum;
    out["value"] = number_to_json(result.value);
    out["witness"] = result.witness ? Json(*result.witness) : Json(nullptr);
    return out;
}

Json to_json(const std::vector<std::pair<double, double>>& diagram)
{
    Json out = Json::array();
    for (const auto& [birth, death] : diagram)
        out.push_back(Json::array({birth, number_to_json(death)}));
    return out;
}

Json to_json(const GranulometricCurve& curve)
{
    Json out;
    out["breakpoints"] = curve.breakpoints;
    out["counts"] = curve.counts;
    return out;
}

Json to_json(const SaliencyMap& map)
{
    Json out = Json::array();
    for (const SaliencyEdge& e : map.edges) {
        Json item;
        item["edge"] = Json::array({e.u, e.v});
        item["value"] = e.value;
        out.push_back(std::move(item));
    }
    return out;
}

Json to_json(const GeneratorSpec& spec)
{
    Json out;
    out["kind"] = to_string(spec.kind);
    out["shape"] = spec.shape;
    out["bumps"] = spec.bumps;
    out["seed"] = spec.seed;
    out["amplitude"] = Json::array({spec.amp_lo, spec.amp_hi});
    out["connectivity"] = to_string(spec.connectivity);
    return out;
}

Json to_json(const ScalarField& field)
{
    Json out;
    out["shape"] = field.shape();
    out["connectivity"] = to_string(field.connectivity());
    out["values"] = Json::array();
    for (double v : field.values())
        out["values"].push_back(v);
    return out;
}

Json to_json(const EquivalenceReport& report)
{
    Json out;
    out["fields_tested"] = report.fields_tested;
    out["pairings_identical"] = report.pairings_identical;
    out["max_value_discrepancy"] = number_to_json(report.max_value_discrepancy);
    if (report.first_counterexample) {
        const Counterexample& c = *report.first_counterexample;
        Json item;
        item["spec"] = c.spec ? to_json(*c.spec) : Json(nullptr);
        item["divergent_min"] = c.divergent_min;
        item["reason"] = c.reason;
        item["field"] = to_json(c.field);
        out["first_counterexample"] = std::move(item);
    } else {
        out["first_counterexample"] = nullptr;
    }
    return out;
}

} // namespace dynper
