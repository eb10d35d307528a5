#include "adic/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adic {

namespace {

Int int_from_json(const json& j) {
  if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    Int v;
    if (v.set_str(j.get<std::string>(), 10) != 0)
      throw Error("bad-json", "cannot parse integer '" + j.get<std::string>() + "'");
    return v;
  }
  throw Error("bad-json", "expected integer, got " + j.dump());
}

Rat rat_from_json(const json& j) {
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  return Rat(int_from_json(j));
}

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("bad-json", "matrix must be a non-empty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  IntMatrix out(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw Error("bad-json", "ragged matrix row " + std::to_string(r));
    for (size_t c = 0; c < cols; ++c) {
      out.at(r, c) = int_from_json(j[r][c]);
      if (out.at(r, c) < 0) throw Error("bad-json", "negative matrix entry");
    }
  }
  return out;
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<size_t> set_from_json(const json& j) {
  std::vector<size_t> out;
  for (const auto& v : j) out.push_back(v.get<size_t>());
  return out;
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("bad-json", std::string("malformed JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

SymbolicSeq parse_symbolic_seq(const json& j) {
  if (j.is_string()) return SymbolicSeq(parse_seq_expr(j.get<std::string>()), 0);
  if (j.is_number()) return SymbolicSeq::constant(rat_from_json(j));
  if (j.is_object()) {
    const unsigned period = j.at("period").get<unsigned>();
    std::vector<SeqExpr> cases;
    for (const auto& c : j.at("cases")) cases.push_back(parse_seq_expr(c.get<std::string>()));
    const long valid = j.value("valid_from", 1L);
    return SymbolicSeq(period, std::move(cases), valid);
  }
  throw Error("bad-json", "expected expression string or {period, cases} object");
}

json symbolic_seq_to_json(const SymbolicSeq& seq) {
  if (seq.period() == 1) return seq.cases()[0].to_string();
  json out;
  out["period"] = seq.period();
  json cases = json::array();
  for (const auto& c : seq.cases()) cases.push_back(c.to_string());
  out["cases"] = std::move(cases);
  out["valid_from"] = seq.valid_from();
  return out;
}

DiagramSpec parse_diagram(const json& j) {
  if (!j.is_object()) throw Error("bad-json", "diagram spec must be an object");
  std::vector<Int> root;
  for (const auto& r : j.at("root")) root.push_back(int_from_json(r));
  const json& body = j.at("body");
  const std::string kind = body.at("kind").get<std::string>();
  if (kind == "stationary")
    return DiagramSpec(std::move(root), StationaryBody{matrix_from_json(body.at("matrix"))});
  if (kind == "explicit") {
    ExplicitBody eb;
    for (const auto& m : body.at("matrices")) eb.matrices.push_back(matrix_from_json(m));
    return DiagramSpec(std::move(root), std::move(eb));
  }
  if (kind == "periodic") {
    PeriodicBody pb;
    if (body.contains("prefix"))
      for (const auto& m : body.at("prefix")) pb.prefix.push_back(matrix_from_json(m));
    for (const auto& m : body.at("cycle")) pb.cycle.push_back(matrix_from_json(m));
    return DiagramSpec(std::move(root), std::move(pb));
  }
  if (kind == "family") {
    FamilyBody fb;
    fb.name = body.at("name").get<std::string>();
    for (const auto& [key, value] : body.at("params").items())
      fb.params.emplace(key, parse_symbolic_seq(value));
    return DiagramSpec(std::move(root), std::move(fb));
  }
  throw Error("bad-json", "unknown body kind '" + kind + "'");
}

json diagram_to_json(const DiagramSpec& spec) {
  json out;
  json root = json::array();
  for (const auto& r : spec.root()) root.push_back(r.get_str());
  out["root"] = std::move(root);
  json body;
  if (const auto* e = std::get_if<ExplicitBody>(&spec.body())) {
    body["kind"] = "explicit";
    json mats = json::array();
    for (const auto& m : e->matrices) mats.push_back(matrix_to_json(m));
    body["matrices"] = std::move(mats);
  } else if (const auto* s = std::get_if<StationaryBody>(&spec.body())) {
    body["kind"] = "stationary";
    body["matrix"] = matrix_to_json(s->matrix);
  } else if (const auto* p = std::get_if<PeriodicBody>(&spec.body())) {
    body["kind"] = "periodic";
    json prefix = json::array(), cycle = json::array();
    for (const auto& m : p->prefix) prefix.push_back(matrix_to_json(m));
    for (const auto& m : p->cycle) cycle.push_back(matrix_to_json(m));
    body["prefix"] = std::move(prefix);
    body["cycle"] = std::move(cycle);
  } else {
    const auto& f = std::get<FamilyBody>(spec.body());
    body["kind"] = "family";
    body["name"] = f.name;
    json params;
    for (const auto& [key, value] : f.params) params[key] = symbolic_seq_to_json(value);
    body["params"] = std::move(params);
  }
  out["body"] = std::move(body);
  return out;
}

DiagramSpec load_diagram(const std::string& path) { return parse_diagram(load_json_file(path)); }

Subdiagram parse_subdiagram(const json& j,
                            const std::function<DiagramSpec(const std::string&)>& load_parent) {
  const std::string kind = j.at("kind").get<std::string>();
  const json& pj = j.at("parent");
  DiagramSpec parent = pj.is_string() ? load_parent(pj.get<std::string>()) : parse_diagram(pj);

  if (kind == "vertex") {
    const json& sj = j.at("supports");
    const std::string skind = sj.at("kind").get<std::string>();
    SupportsBody supports = [&]() -> SupportsBody {
      if (skind == "selector")
        return SelectorSupports{sj.at("name").get<std::string>(), sj.value("vertex", size_t{0})};
      if (skind == "stationary") return StationarySupports{set_from_json(sj.at("set"))};
      if (skind == "periodic") {
        PeriodicSupports ps;
        if (sj.contains("prefix"))
          for (const auto& s : sj.at("prefix")) ps.prefix.push_back(set_from_json(s));
        for (const auto& s : sj.at("cycle")) ps.cycle.push_back(set_from_json(s));
        return ps;
      }
      if (skind == "explicit") {
        ExplicitSupports es;
        for (const auto& s : sj.at("sets")) es.sets.push_back(set_from_json(s));
        return es;
      }
      throw Error("bad-json", "unknown supports kind '" + skind + "'");
    }();
    return VertexSubdiagram(std::move(parent), std::move(supports));
  }
  if (kind == "edge") {
    std::optional<std::vector<Int>> root_opt;
    if (j.contains("root")) {
      std::vector<Int> r;
      for (const auto& x : j.at("root")) r.push_back(int_from_json(x));
      root_opt = std::move(r);
    }
    // reuse the diagram parser for the matrices body
    json spec_doc;
    json root_json = json::array();
    for (const auto& r : root_opt ? *root_opt : parent.root()) root_json.push_back(r.get_str());
    spec_doc["root"] = std::move(root_json);
    spec_doc["body"] = j.at("matrices");
    DiagramSpec body_spec = parse_diagram(spec_doc);
    return EdgeSubdiagram(std::move(parent), body_spec.body(), std::move(root_opt));
  }
  throw Error("bad-json", "unknown subdiagram kind '" + kind + "'");
}

Subdiagram load_subdiagram(const std::string& path) {
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  return parse_subdiagram(load_json_file(path), [&base](const std::string& rel) {
    const std::filesystem::path p = rel;
    return load_diagram(p.is_absolute() ? p.string() : (base / p).string());
  });
}

MeasureFamily resolve_measure(const json& j, const DiagramSpec& spec, long depth) {
  const std::string kind = j.is_null() ? "canonical-ecs" : j.at("kind").get<std::string>();
  if (kind == "canonical-ecs") return uniform_ecs_measure(spec, depth);
  if (kind == "random") return random_measure(spec, depth, j.value("seed", std::uint64_t{0}));
  if (kind == "extreme") return extreme_measure(spec, depth, j.value("vertex", size_t{0}));
  if (kind == "stationary-pf") {
    const double tol = j.value("tol", 1e-9);
    PerronResult pf = stationary_pf(spec, tol);
    // rationalize the eigendata so the family is exact and compatible
    auto lam = rationalize(pf.lambda, 10 * tol);
    std::vector<Rat> x;
    for (double v : pf.eigenvector) {
      auto r = rationalize(v, 10 * tol);
      if (!r) throw Error("no-convergence", "cannot rationalize eigenvector entry");
      x.push_back(*r);
    }
    if (!lam) throw Error("no-convergence", "cannot rationalize eigenvalue");
    std::vector<MeasureVector> levels;
    Rat scale(1);
    for (long n = 1; n <= depth; ++n) {
      std::vector<Rat> values;
      for (const auto& v : x) values.push_back(v * scale);
      levels.push_back({n, std::move(values)});
      scale /= *lam;
    }
    const bool uniform = std::all_of(x.begin(), x.end(), [&](const Rat& v) { return v == x[0]; });
    GeometricMeasureProfile profile{x, SymbolicSeq::constant(Rat(1) / *lam), uniform};
    MeasureFamily fam(std::move(levels), std::move(profile));
    if (!is_compatible(spec, fam))
      throw Error("no-convergence",
                  "rationalized eigendata is not an exact invariant family; lower tol");
    return fam;
  }
  if (kind == "explicit") {
    std::vector<MeasureVector> levels;
    long n = 1;
    for (const auto& level : j.at("levels")) {
      std::vector<Rat> values;
      for (const auto& v : level) values.push_back(rat_from_json(v));
      levels.push_back({n++, std::move(values)});
    }
    return MeasureFamily(std::move(levels));
  }
  throw Error("bad-json", "unknown measure kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

json rats_to_json(const std::vector<Rat>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(rat_to_string(x));
  return out;
}

json heights_to_json(const std::vector<Int>& h) {
  json out = json::array();
  for (const auto& x : h) out.push_back(x.get_str());
  return out;
}

namespace {

json violations_to_json(const std::vector<Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    json e;
    e["code"] = v.code;
    e["level"] = v.level;
    if (v.row >= 0) e["row"] = v.row;
    if (v.col >= 0) e["col"] = v.col;
    e["message"] = v.message;
    out.push_back(std::move(e));
  }
  return out;
}

json classification_to_json(Classification cls, bool /*symbolic*/,
                            const std::optional<HeuristicOutcome>& h) {
  json out;
  switch (cls) {
    case Classification::ExactConvergent:
      out["kind"] = "exact";
      out["convergent"] = true;
      break;
    case Classification::ExactDivergent:
      out["kind"] = "exact";
      out["convergent"] = false;
      break;
    case Classification::LikelyConvergent:
      out["kind"] = "likely";
      out["convergent"] = true;
      break;
    case Classification::LikelyDivergent:
      out["kind"] = "likely";
      out["convergent"] = false;
      break;
    case Classification::Inconclusive: out["kind"] = "inconclusive"; break;
  }
  if (h) {
    json hh;
    hh["window"] = h->params.window;
    hh["geometric_threshold"] = rat_to_string(h->params.geometric_threshold);
    hh["divergence_floor"] = rat_to_string(h->params.divergence_floor);
    hh["detail"] = h->detail;
    out["heuristic"] = std::move(hh);
  }
  return out;
}

}  // namespace

json to_json(const ValidationReport& rep) {
  json out;
  out["ok"] = rep.ok;
  out["violations"] = violations_to_json(rep.violations);
  return out;
}

json to_json(const SubValidationReport& rep) {
  json out;
  out["ok"] = rep.ok;
  out["violations"] = violations_to_json(rep.violations);
  out["proper_levels"] = rep.proper_levels;
  out["proper_seen"] = rep.proper_seen;
  return out;
}

json to_json(const SumCheckReport& rep) {
  json out;
  out["ok"] = rep.ok;
  if (!rep.ok) out["violation_level"] = rep.violation_level;
  json sums = json::array();
  for (const auto& s : rep.sums) sums.push_back(s.get_str());
  out["sums"] = std::move(sums);
  return out;
}

json to_json(const StochasticMatrix& m) {
  json out;
  out["level"] = m.level;
  json rows = json::array();
  for (size_t r = 0; r < m.entries.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.entries.cols(); ++c) row.push_back(rat_to_string(m.entries.at(r, c)));
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  return out;
}

json to_json(const MeasureFamily& fam) {
  json out;
  json levels = json::array();
  for (const auto& level : fam.levels()) levels.push_back(rats_to_json(level.values));
  out["levels"] = std::move(levels);
  return out;
}

json to_json(const SimplexState& s) {
  json out;
  out["base_level"] = s.base_level;
  out["depth"] = s.depth;
  json pts = json::array();
  for (size_t i = 0; i < s.extreme_points.size(); ++i) {
    json p;
    p["source_vertex"] = s.sources[i];
    p["values"] = rats_to_json(s.extreme_points[i].values);
    pts.push_back(std::move(p));
  }
  out["extreme_points"] = std::move(pts);
  out["step_diameters"] = rats_to_json(s.step_diameters);
  return out;
}

namespace {
json count_verdict(ErgodicCountReport::Kind kind, int count) {
  json v;
  switch (kind) {
    case ErgodicCountReport::Kind::Exact: v["kind"] = "exact"; break;
    case ErgodicCountReport::Kind::LowerBound: v["kind"] = "lower-bound"; break;
    case ErgodicCountReport::Kind::Heuristic: v["kind"] = "heuristic"; break;
  }
  v["value"] = count;
  return v;
}
}  // namespace

json to_json(const ErgodicCountReport& rep) {
  json out;
  out["depth"] = rep.depth;
  out["rank"] = rep.rank;
  out["mode"] = rep.mode == CountMode::Determinant ? "determinant" : "diameter";
  if (!rep.z_values.empty()) out["z_values"] = rats_to_json(rep.z_values);
  out["partial_product"] = rat_to_string(rep.partial_product);
  out["diameter"] = rat_to_string(rep.diameter);
  if (!rep.singular_levels.empty()) out["singular_levels"] = rep.singular_levels;
  out["verdict"] = count_verdict(rep.kind, rep.count);
  out["symbolic"] = rep.symbolic;
  if (rep.heuristic)
    out["heuristic"] = classification_to_json(Classification::Inconclusive, false, rep.heuristic)
                           .at("heuristic");
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

json to_json(const Rank2Report& rep) {
  json out;
  out["depth"] = rep.depth;
  out["gap_terms"] = rats_to_json(rep.gap_terms);
  out["major_terms"] = rats_to_json(rep.major_terms);
  out["minor_terms"] = rats_to_json(rep.minor_terms);
  out["gap_class"] = classification_to_json(rep.gap_cls, rep.symbolic, rep.heuristic);
  out["major_class"] = classification_to_json(rep.major_cls, rep.symbolic, std::nullopt);
  out["minor_class"] = classification_to_json(rep.minor_cls, rep.symbolic, std::nullopt);
  out["verdict"] = count_verdict(rep.kind, rep.count);
  if (!rep.odometer_tracks.empty()) out["odometer_tracks"] = rep.odometer_tracks;
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

json to_json(const PerronResult& res, double tol) {
  auto dec = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  json out;
  out["lambda"] = dec(res.lambda);
  out["tolerance"] = dec(tol);
  json x = json::array();
  for (double v : res.eigenvector) x.push_back(dec(v));
  out["eigenvector"] = std::move(x);
  out["iterations"] = res.iterations;
  out["damped"] = res.damped;
  out["cylinder_formula"] = "p_v(n) = x_v / lambda^(n-1)";
  return out;
}

json to_json(const SubspaceMeasureReport& rep) {
  json out;
  out["depth"] = rep.depth;
  out["level_measures"] = rats_to_json(rep.level_measures);
  out["terms"] = rats_to_json(rep.terms);
  out["partial_sums"] = rats_to_json(rep.partial_sums);
  json v;
  switch (rep.verdict) {
    case MeasureLimitVerdict::ExactZero: v = {{"kind", "exact"}, {"positive", false}}; break;
    case MeasureLimitVerdict::ExactPositive: v = {{"kind", "exact"}, {"positive", true}}; break;
    case MeasureLimitVerdict::LikelyZero: v = {{"kind", "likely"}, {"positive", false}}; break;
    case MeasureLimitVerdict::LikelyPositive: v = {{"kind", "likely"}, {"positive", true}}; break;
    case MeasureLimitVerdict::Inconclusive: v = {{"kind", "inconclusive"}}; break;
  }
  out["verdict"] = std::move(v);
  out["lower"] = rat_to_string(rep.lower);
  out["upper"] = rat_to_string(rep.upper);
  out["symbolic"] = rep.symbolic;
  if (rep.heuristic)
    out["heuristic"] = classification_to_json(Classification::Inconclusive, false, rep.heuristic)
                           .at("heuristic");
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

json to_json(const ThinnessReport& rep) {
  json out;
  out["depth"] = rep.depth;
  out["max_ratios"] = rats_to_json(rep.max_ratios);
  out["min_ratios"] = rats_to_json(rep.min_ratios);
  json v;
  switch (rep.verdict) {
    case ThinnessVerdict::ExactThin: v = {{"kind", "exact"}, {"thin", true}}; break;
    case ThinnessVerdict::ExactNotThin: v = {{"kind", "exact"}, {"thin", false}}; break;
    case ThinnessVerdict::LikelyThin: v = {{"kind", "likely"}, {"thin", true}}; break;
    case ThinnessVerdict::LikelyNotThin: v = {{"kind", "likely"}, {"thin", false}}; break;
    case ThinnessVerdict::Inconclusive: v = {{"kind", "inconclusive"}}; break;
  }
  out["verdict"] = std::move(v);
  out["symbolic"] = rep.symbolic;
  out["simplicity_proxy"] = rep.simplicity_proxy;
  if (rep.heuristic)
    out["heuristic"] = classification_to_json(Classification::Inconclusive, false, rep.heuristic)
                           .at("heuristic");
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

json to_json(const CriterionRow& row) {
  json out;
  out["criterion"] = row.name;
  out["kind"] = to_string(row.kind);
  out["terms"] = rats_to_json(row.terms);
  if (!row.partial_sums.empty()) out["partial_sum"] = rat_to_string(row.partial_sums.back());
  out["partial_sums"] = rats_to_json(row.partial_sums);
  out["class"] = classification_to_json(row.cls, row.symbolic, row.heuristic);
  if (!row.note.empty()) out["note"] = row.note;
  return out;
}

namespace {
json extension_verdict_json(ExtensionVerdict v) {
  switch (v) {
    case ExtensionVerdict::ExactFinite: return {{"kind", "exact"}, {"finite", true}};
    case ExtensionVerdict::ExactInfinite: return {{"kind", "exact"}, {"finite", false}};
    case ExtensionVerdict::LikelyFinite: return {{"kind", "likely"}, {"finite", true}};
    case ExtensionVerdict::LikelyInfinite: return {{"kind", "likely"}, {"finite", false}};
    case ExtensionVerdict::Inconclusive: return {{"kind", "inconclusive"}};
  }
  return {{"kind", "inconclusive"}};
}
}  // namespace

json to_json(const ExtensionReport& rep) {
  json out;
  out["depth"] = rep.depth;
  out["mass"] = rats_to_json(rep.mass);
  out["increments"] = rats_to_json(rep.increments);
  json rows = json::array();
  for (const auto& r : rep.criteria) rows.push_back(to_json(r));
  out["criteria"] = std::move(rows);
  out["verdict"] = extension_verdict_json(rep.verdict);
  if (!rep.conflicts.empty()) out["conflicts"] = rep.conflicts;
  if (!rep.basis.empty()) out["basis"] = rep.basis;
  return out;
}

json to_json(const ErsEcsReport& rep) {
  json out;
  json rows = json::array();
  for (const auto& r : rep.criteria) rows.push_back(to_json(r));
  out["criteria"] = std::move(rows);
  out["verdict"] = extension_verdict_json(rep.verdict);
  if (!rep.basis.empty()) out["basis"] = rep.basis;
  return out;
}

json to_json(const OdometerCheckReport& rep) {
  json out;
  out["row"] = to_json(rep.row);
  out["verdict"] = extension_verdict_json(rep.verdict);
  if (!rep.cross_validation.empty()) {
    json rows = json::array();
    for (const auto& r : rep.cross_validation) rows.push_back(to_json(r));
    out["cross_validation"] = std::move(rows);
  }
  return out;
}

json to_json(const WitnessReport& rep) {
  json out;
  if (rep.witness_level)
    out["witness_level"] = *rep.witness_level;
  else
    out["witness_level"] = nullptr;
  out["mass"] = rats_to_json(rep.mass);
  out["lower_bounds"] = rats_to_json(rep.lower_bounds);
  return out;
}

std::string series_csv(const std::vector<Rat>& terms, const std::vector<Rat>& partial_sums,
                       long first_level) {
  std::ostringstream os;
  os << "level,term,term_decimal,partial_sum,partial_sum_decimal\n";
  for (size_t i = 0; i < terms.size(); ++i) {
    const Rat& ps = i < partial_sums.size() ? partial_sums[i] : terms[i];
    os << (first_level + static_cast<long>(i)) << ',' << rat_to_string(terms[i]) << ','
       << rat_to_decimal(terms[i]) << ',' << rat_to_string(ps) << ',' << rat_to_decimal(ps)
       << '\n';
  }
  return os.str();
}

}  // namespace adic
