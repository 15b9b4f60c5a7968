#include "valkit/json_io.hpp"

#include "valkit/errors.hpp"
#include "valkit/expr.hpp"

namespace valkit {

Json gamma_to_json(const GammaElement& g) {
  Json j;
  j["main"] = Json::array();
  for (const Rat& c : g.main()) j["main"].push_back(rat_to_string(c));
  j["inf"] = Json::array();
  for (const Rat& c : g.inf()) j["inf"].push_back(rat_to_string(c));
  return j;
}

GammaElement gamma_from_json(const Json& j, int main_rank, int inf_rank) {
  std::vector<Rat> main, inf;
  for (const auto& v : j.at("main")) main.push_back(rat_from_string(v.get<std::string>()));
  if (j.contains("inf"))
    for (const auto& v : j.at("inf")) inf.push_back(rat_from_string(v.get<std::string>()));
  if (inf.empty()) inf.assign(inf_rank, Rat(0));  // omitted block defaults to zero
  if (static_cast<int>(main.size()) != main_rank || static_cast<int>(inf.size()) != inf_rank)
    throw structural_error("gamma element rank mismatch in JSON");
  return GammaElement(std::move(main), std::move(inf));
}

Json series_to_json(const HahnSeries& s, const Universe& u) {
  Json j;
  j["terms"] = Json::array();
  for (const auto& [g, c] : s.terms()) {
    Json term;
    term["exp"] = gamma_to_json(g);
    term["coeff"] = c.to_string(u.res_vars);
    j["terms"].push_back(term);
  }
  j["precision"] = s.is_exact() ? Json("exact") : gamma_to_json(s.precision().cutoff);
  return j;
}

HahnSeries series_from_json(const Json& j, const Universe& u) {
  if (j.is_string()) return parse_series(j.get<std::string>(), u);
  std::vector<std::pair<GammaElement, ResElement>> terms;
  for (const auto& term : j.at("terms")) {
    GammaElement g = gamma_from_json(term.at("exp"), u.main_rank(), u.inf_rank);
    ResElement c = parse_res_element(term.at("coeff").get<std::string>(), u);
    terms.emplace_back(std::move(g), std::move(c));
  }
  Precision prec = Precision::make_exact();
  if (j.contains("precision") && !j.at("precision").is_string())
    prec = Precision::truncated(gamma_from_json(j.at("precision"), u.main_rank(), u.inf_rank));
  return HahnSeries::from_terms(u.main_rank(), u.inf_rank, u.var_count(), std::move(terms), prec);
}

Json subgroup_to_json(const GammaSubgroup& g) {
  Json j;
  j["generators"] = Json::array();
  GammaSubgroup normalized = g.normalized();
  for (const auto& gen : normalized.generators()) j["generators"].push_back(gamma_to_json(gen));
  j["shadow"] = true;  // certified only at the degree bound
  return j;
}

Universe universe_from_json(const Json& j) {
  Universe u;
  for (const auto& a : j.at("axes")) u.axes.push_back(a.get<std::string>());
  if (j.contains("res_vars"))
    for (const auto& v : j.at("res_vars")) u.res_vars.push_back(v.get<std::string>());
  if (j.contains("inf_rank")) u.inf_rank = j.at("inf_rank").get<int>();
  if (j.contains("precision_cap")) u.precision_cap = j.at("precision_cap").get<long>();
  return u;
}

Json universe_to_json(const Universe& u) {
  Json j;
  j["axes"] = u.axes;
  j["res_vars"] = u.res_vars;
  if (u.inf_rank) j["inf_rank"] = u.inf_rank;
  j["precision_cap"] = u.precision_cap;
  return j;
}

std::map<std::string, FieldPtr> presentations_from_json(const Json& j, const Universe& u) {
  std::map<std::string, FieldPtr> fields;
  for (const auto& p : j) {
    std::string name = p.at("name").get<std::string>();
    if (fields.count(name)) throw structural_error("duplicate presentation name: " + name);
    FieldPtr base;
    if (p.contains("base") && !p.at("base").is_null()) {
      std::string base_name = p.at("base").get<std::string>();
      if (base_name != "trivial") {
        auto it = fields.find(base_name);
        if (it == fields.end())
          throw structural_error("presentation " + name + " references undeclared base " +
                                 base_name);
        base = it->second;
      }
    }
    std::vector<HahnSeries> gens;
    if (p.contains("generators"))
      for (const auto& g : p.at("generators")) gens.push_back(series_from_json(g, u));
    int bound = p.contains("degree_bound") ? p.at("degree_bound").get<int>() : 4;
    fields[name] = make_field(u, name, base, std::move(gens), bound);
  }
  return fields;
}

PowerModel power_model_from_json(const Json& j, const Universe& u) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "acf") return PowerModel::acf();
  if (kind == "rcf") {
    std::vector<Rat> point;
    if (j.contains("sample_point"))
      for (const auto& q : j.at("sample_point")) point.push_back(rat_from_string(q.get<std::string>()));
    point.resize(u.var_count(), Rat(1));
    return PowerModel::rcf(std::move(point));
  }
  if (kind == "table") {
    PowerModel model;
    model.kind = PowerModelKind::explicit_table;
    for (const auto& [n_str, tj] : j.at("tables").items()) {
      PowerTable table;
      for (const auto& cj : tj.at("cosets")) {
        PowerCoset coset;
        coset.name = cj.at("name").get<std::string>();
        coset.rep =
            RvElement(gamma_from_json(cj.at("rep").at("gamma"), u.main_rank(), u.inf_rank),
                      parse_res_element(cj.at("rep").at("coeff").get<std::string>(), u));
        if (cj.contains("k_rep")) coset.k_rep = cj.at("k_rep").get<bool>();
        table.cosets.push_back(std::move(coset));
      }
      if (tj.contains("identity")) table.identity = tj.at("identity").get<size_t>();
      for (const auto& row : tj.at("product")) {
        std::vector<size_t> r;
        for (const auto& x : row) r.push_back(x.get<size_t>());
        table.product.push_back(std::move(r));
      }
      size_t k = table.cosets.size();
      if (table.product.size() != k)
        throw structural_error("power table product must be square");
      for (const auto& row : table.product) {
        if (row.size() != k) throw structural_error("power table product must be square");
        for (size_t v : row)
          if (v >= k) throw structural_error("power table product entry out of range");
      }
      for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j)
          if (table.cosets[i].rep == table.cosets[j].rep)
            throw structural_error("power table lists the same representative twice");
      if (table.identity >= k) throw structural_error("power table identity out of range");
      model.tables[std::stol(n_str)] = std::move(table);
    }
    return model;
  }
  throw structural_error("unknown power model kind: " + kind);
}

Json basis_report_to_json(const BasisReport& r, const Universe& u) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["partition"] = Json::array();
  for (const auto& cls : r.coset_partition) {
    Json c = Json::array();
    for (size_t i : cls) c.push_back(i + 1);  // 1-based in reports
    j["partition"].push_back(c);
  }
  if (r.witness) {
    Json w;
    w["coefficients"] = Json::array();
    for (const auto& c : r.witness->coefficients)
      w["coefficients"].push_back(series_to_json(c, u));
    if (r.witness->achieved)
      w["achieved"] = gamma_to_json(*r.witness->achieved);
    else
      w["achieved"] = "infinite";
    w["achieved_is_lower_bound"] = r.witness->achieved_is_lower_bound;
    w["bound"] = gamma_to_json(r.witness->bound);
    j["witness"] = w;
  }
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

Json hypothesis_report_to_json(const HypothesisReport& r) {
  Json j = Json::array();
  for (const auto& item : r.items) {
    Json e;
    e["name"] = item.name;
    e["status"] = item.status == HypStatus::pass
                      ? "pass"
                      : item.status == HypStatus::bounded_pass ? "bounded-degree-only" : "fail";
    e["detail"] = item.detail;
    j.push_back(e);
  }
  return j;
}

Json compositum_report_to_json(const CompositumReport& r) {
  Json j;
  j["ok"] = r.ok;
  if (r.valuation) j["valuation"] = gamma_to_json(*r.valuation);
  j["counterexamples"] = Json::array();
  for (const auto& c : r.counterexamples) {
    Json e;
    e["what"] = c.what;
    e["detail"] = c.detail;
    j["counterexamples"].push_back(e);
  }
  return j;
}

namespace {
Json extend_counterexamples(const std::vector<ExtendCounterexample>& list) {
  Json j = Json::array();
  for (const auto& c : list) {
    Json e;
    e["check"] = c.check;
    e["element"] = c.element;
    e["expected"] = c.expected;
    e["got"] = c.got;
    j.push_back(e);
  }
  return j;
}
}  // namespace

Json extend_report_to_json(const ExtendReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["elements_checked"] = r.elements_checked;
  j["checks"] = {{"valuation", r.valuation_checks}, {"residue", r.residue_checks},
                 {"rv", r.rv_checks},               {"coset", r.coset_checks},
                 {"homomorphism", r.hom_checks},    {"well_definedness", r.welldef_checks}};
  j["counterexamples"] = extend_counterexamples(r.counterexamples);
  j["rv_flags"] = extend_counterexamples(r.rv_flags);
  if (!r.basis_note.empty()) j["basis"] = r.basis_note;
  return j;
}

Json refinement_report_to_json(const RefinementReport& r) {
  Json j = Json::array();
  for (const auto& item : r.items) {
    Json e;
    e["name"] = item.name;
    e["ok"] = item.ok;
    if (!item.witness.empty()) e["witness"] = item.witness;
    j.push_back(e);
  }
  return j;
}

}  // namespace valkit
