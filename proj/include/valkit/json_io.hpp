#ifndef VALKIT_JSON_IO_HPP
#define VALKIT_JSON_IO_HPP

#include <json.hpp>

#include <map>
#include <string>

#include "valkit/morphisms.hpp"
#include "valkit/separated.hpp"

namespace valkit {

using Json = nlohmann::json;

Json gamma_to_json(const GammaElement& g);
GammaElement gamma_from_json(const Json& j, int main_rank, int inf_rank);

Json series_to_json(const HahnSeries& s, const Universe& u);
HahnSeries series_from_json(const Json& j, const Universe& u);

Json subgroup_to_json(const GammaSubgroup& g);

Universe universe_from_json(const Json& j);
Json universe_to_json(const Universe& u);

// Ordered presentation list; bases must be declared before use. "base" is
// null or a previously declared name.
std::map<std::string, FieldPtr> presentations_from_json(const Json& j, const Universe& u);

PowerModel power_model_from_json(const Json& j, const Universe& u);

Json basis_report_to_json(const BasisReport& r, const Universe& u);
Json hypothesis_report_to_json(const HypothesisReport& r);
Json compositum_report_to_json(const CompositumReport& r);
Json extend_report_to_json(const ExtendReport& r);
Json refinement_report_to_json(const RefinementReport& r);

}  // namespace valkit

#endif
