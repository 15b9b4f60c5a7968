#include "valkit/task.hpp"

#include <cstdlib>
#include <functional>
#include <fstream>
#include <ostream>
#include <sstream>

#include "valkit/errors.hpp"
#include "valkit/expr.hpp"
#include "valkit/generate.hpp"

namespace valkit {

namespace {

struct TaskContext {
  Universe u;
  std::map<std::string, FieldPtr> fields;
  std::optional<PowerModel> model;
  std::uint64_t seed = 1;
  std::string format;
};

FieldPtr field_or_throw(const TaskContext& ctx, const Json& task, const std::string& key) {
  std::string name = task.at(key).get<std::string>();
  auto it = ctx.fields.find(name);
  if (it == ctx.fields.end()) throw structural_error("unknown presentation: " + name);
  return it->second;
}

std::vector<HahnSeries> series_list(const TaskContext& ctx, const Json& task,
                                    const std::string& key) {
  std::vector<HahnSeries> out;
  if (!task.contains(key)) return out;
  for (const auto& s : task.at(key)) out.push_back(series_from_json(s, ctx.u));
  return out;
}

struct TaskResult {
  int severity = kExitVerified;
  Json record;
};

TaskResult run_sep_check(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr base = field_or_throw(ctx, task, "base");
  auto vectors = series_list(ctx, task, "vectors");
  BasisReport report = check_separated(ctx.u, vectors, *base);
  result.record = basis_report_to_json(report, ctx.u);
  result.record["vectors"] = Json::array();
  for (const auto& v : vectors) result.record["vectors"].push_back(series_to_json(v, ctx.u));
  if (report.verdict != BasisVerdict::separated_good &&
      report.verdict != BasisVerdict::separated_not_good)
    result.severity = kExitNegative;
  return result;
}

TaskResult run_sep_make(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr base = field_or_throw(ctx, task, "base");
  auto vectors = series_list(ctx, task, "vectors");
  Precision target = Precision::truncated(default_cutoff(ctx.u));
  SeparationResult sep = is_trivially_valued(*base)
                             ? make_separated_trivial(ctx.u, vectors, *base)
                             : make_separated(ctx.u, vectors, *base, target);
  Json j;
  switch (sep.status) {
    case ConstructionStatus::ok: {
      j["status"] = "ok";
      j["basis"] = Json::array();
      for (const auto& b : sep.basis) j["basis"].push_back(series_to_json(b, ctx.u));
      j["change_matrix"] = Json::array();
      for (const auto& row : sep.change) {
        Json r = Json::array();
        for (const auto& entry : row) r.push_back(series_to_json(entry, ctx.u));
        j["change_matrix"].push_back(r);
      }
      BasisReport verdict = check_separated(ctx.u, sep.basis, *base);
      j["verdict"] = to_string(verdict.verdict);
      if (verdict.verdict != BasisVerdict::separated_good) result.severity = kExitNegative;
      break;
    }
    case ConstructionStatus::not_independent:
      j["status"] = "not-independent";
      j["detail"] = sep.message;
      result.severity = kExitNegative;
      break;
    case ConstructionStatus::precision_exhausted:
      j["status"] = "precision-exhausted";
      j["detail"] = sep.message;
      result.severity = kExitPrecision;
      break;
  }
  result.record = std::move(j);
  return result;
}

TaskResult run_sep_lift(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr base = field_or_throw(ctx, task, "base");
  FieldPtr over = field_or_throw(ctx, task, "over");
  FieldPtr l;
  if (task.contains("L")) l = field_or_throw(ctx, task, "L");
  auto vectors = series_list(ctx, task, "vectors");
  BasisReport report = check_lift(ctx.u, vectors, base, over, l);
  result.record = basis_report_to_json(report, ctx.u);
  {
    FieldPtr synth = l ? l : make_field(ctx.u, base->name + "(basis)", base, vectors,
                                        base->degree_bound);
    result.record["hypotheses"] = hypothesis_report_to_json(check_hypotheses(*synth, *over, *base));
  }
  if (report.verdict != BasisVerdict::separated_good) result.severity = kExitNegative;
  return result;
}

TaskResult run_comp_verify(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr base = field_or_throw(ctx, task, "base");
  FieldPtr m_field = field_or_throw(ctx, task, "m_field");
  auto ell = series_list(ctx, task, "ell");
  int degree = task.contains("degree") ? task.at("degree").get<int>() : 4;

  BasisReport sep = check_separated(ctx.u, ell, *base);
  if (sep.verdict != BasisVerdict::separated_good)
    throw hypothesis_violation("ell is not separated-good over " + base->name);

  auto monos = enumerate_monomials(*m_field, std::min(degree, m_field->degree_bound));
  long combos = 0, mismatches = 0;
  Json first_bad;
  // all assignments of M-monomials to the positions, capped for large bases
  std::vector<size_t> idx(ell.size(), 0);
  const long combo_cap = 100000;
  while (true) {
    std::vector<HahnSeries> m;
    for (size_t i = 0; i < ell.size(); ++i) m.push_back(monos[idx[i]].value);
    CompositumReport rep = compositum_check(ctx.u, ell, m, *base);
    ++combos;
    if (!rep.ok) {
      ++mismatches;
      if (first_bad.is_null()) first_bad = compositum_report_to_json(rep);
    } else {
      rv_of_combination(ctx.u, ell, m);
    }
    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == monos.size()) idx[pos++] = 0;
    if (pos == idx.size() || combos >= combo_cap) break;
  }
  Json j;
  j["combinations"] = combos;
  j["mismatches"] = mismatches;
  if (!first_bad.is_null()) j["first_counterexample"] = first_bad;
  result.record = std::move(j);
  if (mismatches) result.severity = kExitNegative;
  return result;
}

TaskResult run_rv_indep(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr l = field_or_throw(ctx, task, "L");
  FieldPtr m = field_or_throw(ctx, task, "M");
  FieldPtr c = field_or_throw(ctx, task, "C");
  auto a = series_list(ctx, task, "a");
  auto b = series_list(ctx, task, "b");
  auto e = series_list(ctx, task, "e");
  RvIndependenceReport report = rv_independent(a, b, e, *l, *m, *c);
  Json j;
  j["independent"] = report.independent;
  j["diagnostic"] = report.diagnostic;
  j["precondition_failed"] = report.precondition_failed;
  // each compared fiber RV_gamma is reported nonempty only through the
  // exhibited degree-bounded pair (a_i, e_i)
  j["fibers"] = Json::array();
  for (size_t i = 0; i < a.size() && i < e.size(); ++i) {
    Json fiber;
    fiber["gamma"] = gamma_to_json(a[i].valuation_or_throw());
    fiber["exhibited_by"] = {series_to_json(a[i], ctx.u), series_to_json(e[i], ctx.u)};
    j["fibers"].push_back(fiber);
  }
  result.record = std::move(j);
  if (report.precondition_failed)
    result.severity = kExitHypothesis;
  else if (!report.independent)
    result.severity = kExitNegative;
  return result;
}

TaskResult run_iso_extend(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr l = field_or_throw(ctx, task, "L");
  FieldPtr m = field_or_throw(ctx, task, "M");
  FieldPtr c = field_or_throw(ctx, task, "C");
  FieldIso sigma;
  sigma.source = l;
  if (task.contains("images")) {
    for (const auto& img : task.at("images")) sigma.images.push_back(series_from_json(img, ctx.u));
  } else {
    // {"sigma": {"<generator expression>": "<image expression>"}}
    sigma.images = l->generators;
    for (const auto& [gen_expr, img] : task.at("sigma").items()) {
      HahnSeries gen = parse_series(gen_expr, ctx.u);
      bool matched = false;
      for (size_t i = 0; i < l->generators.size(); ++i) {
        if (l->generators[i] == gen) {
          sigma.images[i] = series_from_json(img, ctx.u);
          matched = true;
          break;
        }
      }
      if (!matched)
        throw structural_error("sigma maps '" + gen_expr + "', which is not a generator of " +
                               l->name);
    }
  }
  if (task.contains("fixes")) {
    sigma.fixes = IsoFixes{};
    for (const auto& f : task.at("fixes")) {
      std::string name = f.get<std::string>();
      if (name == "C") sigma.fixes.c_pointwise = true;
      else if (name == "Gamma_L") sigma.fixes.gamma_l = true;
      else if (name == "k_L") sigma.fixes.k_l = true;
      else if (name == "RV_L") sigma.fixes.rv_l = true;
      else throw structural_error("unknown fix flag: " + name);
    }
  }
  int degree = task.contains("degree") ? task.at("degree").get<int>() : 3;
  std::vector<long> ns;
  if (task.contains("power_ns"))
    for (const auto& n : task.at("power_ns")) ns.push_back(n.get<long>());
  const PowerModel* model = ctx.model && !ns.empty() ? &*ctx.model : nullptr;
  ExtendReport report =
      extend_iso(ctx.u, sigma, l, m, c, degree, model, ns, ctx.seed, 40);
  result.record = extend_report_to_json(report);
  if (!report.ok) result.severity = kExitNegative;
  return result;
}

TaskResult run_val_refine(TaskContext& ctx, const Json& task) {
  TaskResult result;
  FieldPtr l = field_or_throw(ctx, task, "L");
  FieldPtr m = field_or_throw(ctx, task, "M");
  FieldPtr c = field_or_throw(ctx, task, "C");
  auto a = series_list(ctx, task, "a");
  auto b = series_list(ctx, task, "b");
  auto e = series_list(ctx, task, "e");
  DeltaPlacement placement = DeltaPlacement::below_main;
  if (task.contains("placement") && task.at("placement").get<std::string>() == "above")
    placement = DeltaPlacement::above_main;
  int degree = task.contains("degree") ? task.at("degree").get<int>() : 4;

  RefineOutcome outcome = refine_valuation(ctx.u, l, m, c, a, e, b, placement);
  Json j;
  j["refine"] = outcome.ok ? "ok" : (outcome.unsupported ? "unsupported-refinement"
                                                         : "precondition-failed");
  j["diagnostic"] = outcome.diagnostic;
  if (!outcome.ok) {
    result.severity = outcome.unsupported ? kExitHypothesis : kExitHypothesis;
    result.record = std::move(j);
    return result;
  }
  j["demoted"] = Json::array();
  for (int v : outcome.universe.demoted) j["demoted"].push_back(ctx.u.res_vars.at(v));
  RefinementReport report = verify_refinement(outcome.universe, l, m, c, degree);
  j["assertions"] = refinement_report_to_json(report);
  if (!report.ok()) result.severity = kExitNegative;
  result.record = std::move(j);
  return result;
}

TaskResult run_suite(TaskContext& ctx, const Json& task) {
  TaskResult result;
  std::string suite = task.at("suite").get<std::string>();
  long count = task.contains("count") ? task.at("count").get<long>() : 1000;
  Rng rng(ctx.seed);
  Json j;
  j["suite"] = suite;
  long failures = 0;

  if (suite == "valuation-axioms") {
    SeriesGenOptions opts;
    for (long i = 0; i < count; ++i) {
      HahnSeries x = random_series(ctx.u, rng, opts);
      HahnSeries y = random_series(ctx.u, rng, opts);
      GammaElement vx = x.valuation_or_throw(), vy = y.valuation_or_throw();
      HahnSeries prod = x * y;
      if (!prod.has_terms() || !(prod.valuation_or_throw() == vx + vy)) ++failures;
      HahnSeries sum = x + y;
      if (sum.has_terms()) {
        const GammaElement& vmin = lex_min(vx, vy);
        if (lex_less(sum.valuation_or_throw(), vmin)) ++failures;
        if (!(vx == vy) && !(sum.valuation_or_throw() == vmin)) ++failures;
      } else if (!(vx == vy)) {
        ++failures;
      }
    }
  } else if (suite == "residue-homomorphism") {
    SeriesGenOptions opts;
    opts.nonneg_exponents = true;
    for (long i = 0; i < count; ++i) {
      HahnSeries x = random_series(ctx.u, rng, opts);
      HahnSeries y = random_series(ctx.u, rng, opts);
      if (!(x.residue() + y.residue() == (x + y).residue())) ++failures;
      if (!(x.residue() * y.residue() == (x * y).residue())) ++failures;
    }
  } else if (suite == "rv-multiplicativity") {
    SeriesGenOptions opts;
    for (long i = 0; i < count; ++i) {
      HahnSeries x = random_series(ctx.u, rng, opts);
      HahnSeries y = random_series(ctx.u, rng, opts);
      if (!(rv_of(x) * rv_of(y) == rv_of(x * y))) ++failures;
      HahnSeries sum = x + y;
      RvSum partial = rv_try_add(rv_of(x), rv_of(y));
      if (!partial.collision) {
        if (!sum.has_terms() || !(partial.value == rv_of(sum))) ++failures;
      }
    }
  } else if (suite == "lambda-tables") {
    if (!ctx.model) throw structural_error("lambda-tables suite needs a power model");
    std::vector<long> ns;
    if (task.contains("power_ns"))
      for (const auto& n : task.at("power_ns")) ns.push_back(n.get<long>());
    if (ns.empty()) ns = {2, 3};
    Json details = Json::array();
    for (long n : ns) {
      LambdaCheckReport rep =
          verify_lambda_tables(n, *ctx.model, ctx.u.main_rank(), ctx.u.inf_rank, ctx.u.var_count());
      Json d;
      d["n"] = n;
      d["ok"] = rep.ok;
      d["checked"] = rep.checked;
      if (!rep.ok) {
        d["counterexample"] = rep.counterexample;
        ++failures;
      }
      details.push_back(d);
    }
    j["tables"] = details;
  } else {
    throw structural_error("unknown suite: " + suite);
  }

  j["count"] = count;
  j["failures"] = failures;
  result.record = std::move(j);
  if (failures) result.severity = kExitNegative;
  return result;
}

TaskResult dispatch(TaskContext& ctx, const Json& task) {
  std::string kind = task.at("kind").get<std::string>();
  if (kind == "sep-check") return run_sep_check(ctx, task);
  if (kind == "sep-make") return run_sep_make(ctx, task);
  if (kind == "sep-lift") return run_sep_lift(ctx, task);
  if (kind == "comp-verify") return run_comp_verify(ctx, task);
  if (kind == "rv-indep") return run_rv_indep(ctx, task);
  if (kind == "iso-extend") return run_iso_extend(ctx, task);
  if (kind == "val-refine") return run_val_refine(ctx, task);
  if (kind == "suite-run") return run_suite(ctx, task);
  throw structural_error("unknown task kind: " + kind);
}

void emit_record(std::ostream& out, const TaskContext& ctx, int index, const std::string& kind,
                 const std::string& status, const Json& payload) {
  if (ctx.format == "text") {
    out << "task " << index << " [" << kind << "] " << status;
    if (payload.contains("verdict")) out << " verdict=" << payload["verdict"].get<std::string>();
    if (payload.contains("detail")) out << " (" << payload["detail"].get<std::string>() << ")";
    out << "\n";
    return;
  }
  Json record;
  record["task"] = index;
  record["kind"] = kind;
  record["status"] = status;
  record["report"] = payload;
  out << record.dump() << "\n";
}

std::string status_name(int severity) {
  switch (severity) {
    case kExitVerified: return "verified";
    case kExitNegative: return "negative";
    case kExitHypothesis: return "hypothesis-violation";
    case kExitPrecision: return "precision-exhausted";
    default: return "usage-error";
  }
}

}  // namespace

int run_task_file(const Json& file, const RunOptions& options, std::ostream& out) {
  TaskContext ctx;
  ctx.format = options.format;
  ctx.u = universe_from_json(file.at("universe"));
  if (!file.at("universe").contains("precision_cap")) {
    if (const char* cap = std::getenv("VALKIT_PRECISION_CAP")) ctx.u.precision_cap = std::atol(cap);
  }
  if (file.contains("presentations"))
    ctx.fields = presentations_from_json(file.at("presentations"), ctx.u);
  if (options.degree_bound) {
    // rebuild every presentation with the overridden bound, preserving base
    // links
    std::map<std::string, FieldPtr> rebuilt;
    std::function<FieldPtr(const FieldPtr&)> rebuild = [&](const FieldPtr& f) -> FieldPtr {
      if (!f) return nullptr;
      auto it = rebuilt.find(f->name);
      if (it != rebuilt.end()) return it->second;
      FieldPtr nb = rebuild(f->base);
      FieldPtr nf = make_field(ctx.u, f->name, nb, f->generators, *options.degree_bound);
      rebuilt[f->name] = nf;
      return nf;
    };
    for (const auto& [name, f] : ctx.fields) rebuild(f);
    ctx.fields = std::move(rebuilt);
  }
  if (file.contains("power_model"))
    ctx.model = power_model_from_json(file.at("power_model"), ctx.u);
  ctx.seed = options.seed ? *options.seed
                          : (file.contains("seed") ? file.at("seed").get<std::uint64_t>() : 1);

  int exit_code = kExitVerified;
  int index = 0;
  int executed = 0;
  for (const auto& task : file.at("tasks")) {
    ++index;
    std::string kind = task.contains("kind") ? task.at("kind").get<std::string>() : "?";
    if (!options.task_filter.empty() && kind != options.task_filter) continue;
    ++executed;
    int severity;
    Json payload;
    try {
      TaskResult result = dispatch(ctx, task);
      severity = result.severity;
      payload = std::move(result.record);
    } catch (const hypothesis_violation& err) {
      severity = kExitHypothesis;
      payload = Json{{"detail", err.what()}};
    } catch (const precision_exhausted& err) {
      severity = kExitPrecision;
      payload = Json{{"detail", err.what()}};
    } catch (const unsupported_model& err) {
      severity = kExitHypothesis;
      payload = Json{{"detail", err.what()}};
    } catch (const internal_inconsistency& err) {
      severity = kExitNegative;
      payload = Json{{"detail", std::string("internal inconsistency: ") + err.what()}};
    }
    emit_record(out, ctx, index, kind, status_name(severity), payload);
    exit_code = std::max(exit_code, severity);
  }

  if (ctx.format == "text") {
    out << "summary: " << executed << " of " << index << " task(s), exit " << exit_code << "\n";
  } else {
    Json summary;
    summary["summary"] = true;
    summary["tasks"] = index;
    summary["executed"] = executed;
    summary["exit"] = exit_code;
    summary["seed"] = ctx.seed;
    out << summary.dump() << "\n";
  }
  return exit_code;
}

int run_task_path(const std::string& path, const RunOptions& options, std::ostream& out) {
  std::ifstream in(path);
  if (!in) {
    out << "error: cannot open task file: " << path << "\n";
    return kExitUsage;
  }
  Json file;
  try {
    file = Json::parse(in);
  } catch (const Json::parse_error& err) {
    out << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  try {
    return run_task_file(file, options, out);
  } catch (const Json::exception& err) {
    out << "error: malformed task file: " << err.what() << "\n";
    return kExitUsage;
  } catch (const structural_error& err) {
    out << "error: " << err.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace valkit
