// Command-line front end for the invariant-measure toolkit: ingests diagram
// and subdiagram JSON, runs the analyses, and emits JSON/CSV/pretty reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "adic/json_io.hpp"
#include "adic/version.hpp"

namespace {

using adic::json;

struct Output {
  std::string format = "json";
  std::string out_path;

  void emit(const json& report, const std::string& pretty_text = "",
            const std::string& csv_text = "") const {
    std::string text;
    if (format == "json") {
      text = report.dump(2);
      text += '\n';
    } else if (format == "csv") {
      if (csv_text.empty()) throw adic::Error("usage", "no CSV form for this command");
      text = csv_text;
    } else if (format == "pretty") {
      text = pretty_text.empty() ? report.dump(2) + "\n" : pretty_text;
    } else {
      throw adic::Error("usage", "unknown format '" + format + "'");
    }
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw adic::Error("io", "cannot write '" + out_path + "'");
      out << text;
    }
  }
};

long default_depth() {
  if (const char* env = std::getenv("ADIC_MEASURES_DEPTH")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return v;
  }
  return 64;
}

json envelope(const std::string& command, long depth) {
  json out;
  out["tool"] = "adic-measures";
  out["version"] = adic::kVersion;
  out["command"] = command;
  out["depth"] = depth;
  return out;
}

adic::MeasureFamily measure_from_option(const std::string& option, const adic::DiagramSpec& spec,
                                        long depth) {
  if (option.empty()) return adic::uniform_ecs_measure(spec, depth);
  json cfg = option.front() == '{' ? adic::parse_json_text(option) : adic::load_json_file(option);
  return adic::resolve_measure(cfg, spec, depth);
}

std::string criteria_csv(const std::vector<adic::CriterionRow>& rows) {
  std::ostringstream os;
  os << "criterion,level,term,term_decimal,partial_sum,partial_sum_decimal\n";
  for (const auto& row : rows)
    for (size_t i = 0; i < row.terms.size(); ++i)
      os << row.name << ',' << (i + 1) << ',' << adic::rat_to_string(row.terms[i]) << ','
         << adic::rat_to_decimal(row.terms[i]) << ',' << adic::rat_to_string(row.partial_sums[i])
         << ',' << adic::rat_to_decimal(row.partial_sums[i]) << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariant-measure analysis of Bratteli diagrams"};
  app.require_subcommand(1);

  long depth = default_depth();
  double tol = 1e-9;
  std::uint64_t budget = 200000;
  std::uint64_t seed = 0;
  Output output;
  app.add_option("--depth", depth, "Truncation depth (levels)")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Tolerance for Perron-Frobenius iteration");
  app.add_option("--budget", budget, "Path budget for oracle enumeration");
  app.add_option("--seed", seed, "Seed for random measures");
  app.add_option("--format", output.format, "Output format: json|csv|pretty");
  app.add_option("--out", output.out_path, "Write the report to a file");

  // validate / heights / telescope -----------------------------------------
  std::string spec_path;
  auto* cmd_validate = app.add_subcommand("validate", "Check the structural invariants of a spec");
  cmd_validate->add_option("spec", spec_path, "Diagram spec JSON file")->required();

  auto* cmd_heights = app.add_subcommand("heights", "Tower heights at the given depth");
  cmd_heights->add_option("spec", spec_path)->required();

  std::string level_list;
  auto* cmd_telescope = app.add_subcommand("telescope", "Contract the diagram to selected levels");
  cmd_telescope->add_option("spec", spec_path)->required();
  cmd_telescope->add_option("--levels", level_list, "Comma-separated levels, starting at 1")
      ->required();

  // measure ------------------------------------------------------------------
  auto* cmd_measure = app.add_subcommand("measure", "Measure-simplex analyses");
  cmd_measure->require_subcommand(1);
  std::string count_mode = "auto";
  auto* measure_count = cmd_measure->add_subcommand("count", "Number of ergodic measures");
  measure_count->add_option("spec", spec_path)->required();
  measure_count->add_option("--mode", count_mode, "determinant|diameter|auto");
  auto* measure_pf = cmd_measure->add_subcommand("pf", "Stationary Perron-Frobenius data");
  measure_pf->add_option("spec", spec_path)->required();
  long simplex_base = 1;
  auto* measure_simplex = cmd_measure->add_subcommand("simplex", "Nested simplex extreme points");
  measure_simplex->add_option("spec", spec_path)->required();
  measure_simplex->add_option("--base", simplex_base, "Base level of the contraction");
  auto* measure_canonical =
      cmd_measure->add_subcommand("canonical", "Canonical equal-column-sum measure");
  measure_canonical->add_option("spec", spec_path)->required();

  // subdiagram ---------------------------------------------------------------
  std::string sub_path, measure_option;
  auto* cmd_sub = app.add_subcommand("subdiagram", "Subdiagram path-space analyses");
  cmd_sub->require_subcommand(1);
  auto* sub_measure = cmd_sub->add_subcommand("measure", "Measure of the subdiagram path space");
  sub_measure->add_option("subdiagram", sub_path, "Subdiagram JSON file")->required();
  sub_measure->add_option("--measure", measure_option,
                          "Measure config (inline JSON or file); default canonical-ecs");
  auto* sub_thin = cmd_sub->add_subcommand("thinness", "Height-ratio thinness analysis");
  sub_thin->add_option("subdiagram", sub_path)->required();
  auto* sub_complement = cmd_sub->add_subcommand("complement", "Complement vertex subdiagram");
  sub_complement->add_option("subdiagram", sub_path)->required();

  // extension ------------------------------------------------------------------
  auto* cmd_ext = app.add_subcommand("extension", "Measure extension to the saturation");
  cmd_ext->require_subcommand(1);
  auto* ext_traj = cmd_ext->add_subcommand("trajectory", "Extension mass trajectory");
  ext_traj->add_option("subdiagram", sub_path)->required();
  ext_traj->add_option("--measure", measure_option, "Subdiagram measure config");
  auto* ext_criteria = cmd_ext->add_subcommand("criteria", "Finiteness criteria table");
  ext_criteria->add_option("subdiagram", sub_path)->required();
  ext_criteria->add_option("--measure", measure_option, "Subdiagram measure config");
  auto* ext_odometer =
      cmd_ext->add_subcommand("odometer-check", "Odometer extension series for 2x2 ERS diagrams");
  ext_odometer->add_option("subdiagram", sub_path)->required();

  // oracle ---------------------------------------------------------------------
  auto* cmd_oracle = app.add_subcommand("oracle", "Brute-force ground truth (debugging)");
  cmd_oracle->require_subcommand(1);
  auto* oracle_paths = cmd_oracle->add_subcommand("paths", "Exhaustive path counts");
  oracle_paths->add_option("spec", spec_path)->required();
  long mass_level = 1;
  auto* oracle_mass = cmd_oracle->add_subcommand("mass", "Direct cylinder-mass summation");
  oracle_mass->add_option("spec", spec_path)->required();
  oracle_mass->add_option("--level", mass_level, "Level of the summation");
  oracle_mass->add_option("--measure", measure_option, "Measure config");
  long from_level = 1, to_level = 2;
  auto* oracle_counts = cmd_oracle->add_subcommand("counts", "Path counts between two levels");
  oracle_counts->add_option("spec", spec_path)->required();
  oracle_counts->add_option("--from", from_level);
  oracle_counts->add_option("--to", to_level);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_validate) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::ValidationReport rep = adic::validate(spec, depth);
      json report = envelope("validate", depth);
      report["result"] = adic::to_json(rep);
      std::ostringstream pretty;
      pretty << (rep.ok ? "ok" : "invalid") << "\n";
      for (const auto& v : rep.violations)
        pretty << "  level " << v.level << ": " << v.code << " (" << v.message << ")\n";
      output.emit(report, pretty.str());
      return rep.ok ? 0 : 1;
    }
    if (*cmd_heights) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      auto h = adic::heights(spec, depth);
      json report = envelope("heights", depth);
      report["result"]["heights"] = adic::heights_to_json(h);
      std::ostringstream pretty;
      for (size_t i = 0; i < h.size(); ++i) pretty << (i ? " " : "") << h[i].get_str();
      pretty << "\n";
      output.emit(report, pretty.str());
      return 0;
    }
    if (*cmd_telescope) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      std::vector<long> levels;
      std::stringstream ss(level_list);
      for (std::string item; std::getline(ss, item, ',');) levels.push_back(std::stol(item));
      adic::DiagramSpec tel = adic::telescope(spec, levels);
      json report = envelope("telescope", depth);
      report["result"]["spec"] = adic::diagram_to_json(tel);
      output.emit(report);
      return 0;
    }
    if (*measure_count) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::CountMode mode = count_mode == "determinant" ? adic::CountMode::Determinant
                             : count_mode == "diameter"  ? adic::CountMode::Diameter
                                                         : adic::CountMode::Auto;
      adic::ErgodicCountReport rep = adic::count_ergodic(spec, depth, mode);
      json report = envelope("measure count", depth);
      report["result"] = adic::to_json(rep);
      std::ostringstream pretty;
      pretty << "ergodic measures: " << report["result"]["verdict"].dump() << "\n";
      std::vector<adic::Rat> partial;
      adic::Rat acc(1);
      for (const auto& z : rep.z_values) partial.push_back(acc *= abs(z));
      output.emit(report, pretty.str(), adic::series_csv(rep.z_values, partial));
      return 0;
    }
    if (*measure_pf) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::PerronResult res = adic::stationary_pf(spec, tol);
      json report = envelope("measure pf", depth);
      report["params"]["tol"] = tol;
      report["result"] = adic::to_json(res, tol);
      output.emit(report);
      return 0;
    }
    if (*measure_simplex) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::SimplexState s = adic::simplex_contract(spec, depth, simplex_base);
      json report = envelope("measure simplex", depth);
      report["params"]["base"] = simplex_base;
      report["result"] = adic::to_json(s);
      output.emit(report);
      return 0;
    }
    if (*measure_canonical) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::MeasureFamily fam = adic::uniform_ecs_measure(spec, depth);
      json report = envelope("measure canonical", depth);
      report["result"] = adic::to_json(fam);
      output.emit(report);
      return 0;
    }
    if (*sub_measure || *sub_thin || *sub_complement || *ext_traj || *ext_criteria ||
        *ext_odometer) {
      adic::Subdiagram sub = adic::load_subdiagram(sub_path);
      const adic::DiagramSpec& parent = adic::parent_of(sub);
      if (*sub_measure) {
        adic::MeasureFamily mu = measure_from_option(measure_option, parent, depth);
        adic::SubspaceMeasureReport rep = adic::subspace_measure(parent, sub, mu, depth);
        json report = envelope("subdiagram measure", depth);
        report["result"] = adic::to_json(rep);
        std::ostringstream pretty;
        pretty << "mu(X_sub) verdict: " << report["result"]["verdict"].dump()
               << ", mu(Y^(depth)) = " << adic::rat_to_string(rep.level_measures.back()) << "\n";
        output.emit(report, pretty.str(), adic::series_csv(rep.terms, rep.partial_sums));
        return 0;
      }
      if (*sub_thin) {
        adic::ThinnessReport rep = adic::thinness(parent, sub, depth);
        json report = envelope("subdiagram thinness", depth);
        report["result"] = adic::to_json(rep);
        std::vector<adic::Rat> partial;
        adic::Rat acc(0);
        for (const auto& t : rep.max_ratios) partial.push_back(acc += t);
        output.emit(report, "thinness: " + report["result"]["verdict"].dump() + "\n",
                    adic::series_csv(rep.max_ratios, partial));
        return 0;
      }
      if (*sub_complement) {
        const auto* vs = std::get_if<adic::VertexSubdiagram>(&sub);
        if (!vs) throw adic::Error("usage", "complement applies to vertex subdiagrams");
        adic::VertexSubdiagram comp = adic::complement(*vs, depth);
        json report = envelope("subdiagram complement", depth);
        json supports;
        if (const auto* sel = std::get_if<adic::SelectorSupports>(&comp.supports())) {
          supports["kind"] = "selector";
          supports["name"] = sel->name;
        } else {
          supports["kind"] = "explicit";
          json sets = json::array();
          for (long n = 1; n <= depth; ++n) sets.push_back(comp.support_at(n));
          supports["sets"] = std::move(sets);
        }
        report["result"]["kind"] = "vertex";
        report["result"]["supports"] = std::move(supports);
        report["result"]["parent"] = adic::diagram_to_json(parent);
        output.emit(report);
        return 0;
      }
      // extension commands need a measure on the subdiagram
      auto sub_measure_family = [&](long d) {
        auto symbolic = adic::sub_spec_symbolic(sub);
        const adic::DiagramSpec sspec = symbolic ? *symbolic : adic::sub_spec_explicit(sub, d);
        return measure_from_option(measure_option, sspec, d);
      };
      if (*ext_traj) {
        adic::MeasureFamily pbar = sub_measure_family(depth);
        adic::ExtensionReport rep = adic::extension_partial(parent, sub, pbar, depth);
        json report = envelope("extension trajectory", depth);
        report["result"] = adic::to_json(rep);
        std::vector<adic::Rat> partial;
        adic::Rat acc(0);
        for (const auto& t : rep.increments) partial.push_back(acc += t);
        output.emit(report,
                    "extension verdict: " + report["result"]["verdict"].dump() + "\n",
                    adic::series_csv(rep.increments, partial));
        return 0;
      }
      if (*ext_criteria) {
        adic::MeasureFamily pbar = sub_measure_family(depth);
        std::vector<adic::CriterionRow> rows;
        if (const auto* vs = std::get_if<adic::VertexSubdiagram>(&sub))
          rows = adic::vertex_criteria(parent, *vs, pbar, depth);
        else
          rows = adic::edge_criteria(parent, std::get<adic::EdgeSubdiagram>(sub), pbar, depth);
        adic::VerdictComposition comp = adic::compose_extension_verdict(rows);
        json report = envelope("extension criteria", depth);
        json table = json::array();
        for (const auto& r : rows) table.push_back(adic::to_json(r));
        report["result"]["criteria"] = std::move(table);
        report["result"]["verdict"] = adic::to_json(adic::ExtensionReport{
            .depth = depth, .verdict = comp.verdict})["verdict"];
        if (!comp.basis.empty()) report["result"]["basis"] = comp.basis;
        if (!comp.conflicts.empty()) report["result"]["conflicts"] = comp.conflicts;
        output.emit(report, "extension verdict: " + report["result"]["verdict"].dump() + "\n",
                    criteria_csv(rows));
        return 0;
      }
      // odometer-check
      const auto* vs = std::get_if<adic::VertexSubdiagram>(&sub);
      if (!vs) throw adic::Error("usage", "odometer-check needs a vertex subdiagram track");
      adic::OdometerCheckReport rep = adic::rank2_odometer_check(parent, vs->supports(), depth);
      json report = envelope("extension odometer-check", depth);
      report["result"] = adic::to_json(rep);
      output.emit(report, "odometer extension: " + report["result"]["verdict"].dump() + "\n",
                  adic::series_csv(rep.row.terms, rep.row.partial_sums));
      return 0;
    }
    if (*oracle_paths) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::PathTable table = adic::enumerate_paths(spec, depth, budget);
      json report = envelope("oracle paths", depth);
      report["params"]["budget"] = budget;
      json counts = json::array();
      for (long n = 1; n <= depth; ++n) counts.push_back(adic::heights_to_json(table.counts_at(n)));
      report["result"]["counts"] = std::move(counts);
      output.emit(report);
      return 0;
    }
    if (*oracle_mass) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::PathTable table = adic::enumerate_paths(spec, mass_level, budget);
      adic::MeasureFamily mu = measure_from_option(measure_option, spec, mass_level);
      adic::Rat mass = adic::brute_measure_mass(spec, table, mu, mass_level);
      json report = envelope("oracle mass", depth);
      report["params"]["level"] = mass_level;
      report["result"]["mass"] = adic::rat_to_string(mass);
      output.emit(report);
      return 0;
    }
    if (*oracle_counts) {
      adic::DiagramSpec spec = adic::load_diagram(spec_path);
      adic::IntMatrix counts = adic::counts_between(spec, from_level, to_level);
      json report = envelope("oracle counts", depth);
      report["params"]["from"] = from_level;
      report["params"]["to"] = to_level;
      json rows = json::array();
      for (size_t r = 0; r < counts.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < counts.cols(); ++c) row.push_back(counts.at(r, c).get_str());
        rows.push_back(std::move(row));
      }
      report["result"]["counts"] = std::move(rows);
      output.emit(report);
      return 0;
    }
  } catch (const adic::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return (e.code() == "bad-json" || e.code() == "io" || e.code() == "usage") ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
