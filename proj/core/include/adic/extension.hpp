#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adic/subdiagram.hpp"

namespace adic {

enum class CriterionKind { Equivalent, Necessary, Sufficient };
std::string to_string(CriterionKind k);

/// One row of a criteria table: a series with per-level exact terms and its
/// classification.
struct CriterionRow {
  std::string name;
  CriterionKind kind = CriterionKind::Equivalent;
  std::vector<Rat> terms;
  std::vector<Rat> partial_sums;
  Classification cls = Classification::Inconclusive;
  bool symbolic = false;
  std::optional<HeuristicOutcome> heuristic;
  std::string note;
};

enum class ExtensionVerdict { ExactFinite, ExactInfinite, LikelyFinite, LikelyInfinite, Inconclusive };
std::string to_string(ExtensionVerdict v);

/// Verdict algebra over criteria rows. The table:
///   equivalent exact-convergent  => exact-finite
///   equivalent exact-divergent   => exact-infinite
///   sufficient exact-convergent  => exact-finite
///   necessary  exact-divergent   => exact-infinite
///   equivalent likely-*          => likely-* (when no exact signal exists)
///   sufficient likely-convergent => likely-finite
///   necessary  likely-divergent  => likely-infinite
/// Convergent sufficient rows say nothing when divergent, and vice versa for
/// necessary rows. Exact signals beat heuristic ones; contradictory signals
/// of equal strength yield Inconclusive and are listed in `conflicts`.
struct VerdictComposition {
  ExtensionVerdict verdict = ExtensionVerdict::Inconclusive;
  std::vector<std::string> conflicts;
  std::string basis;  // name of the decisive row
};

VerdictComposition compose_extension_verdict(std::span<const CriterionRow> rows);

/// Mass trajectory of the canonical extension: m_n = Σ_w h^{(n)}_w p̄^{(n)}_w
/// over the subdiagram's vertices, with the exact increment identity
/// m_{n+1} - m_n = series term. pbar is a compatible measure family on the
/// subdiagram (mass 1 for the paper-normalized setting).
struct ExtensionReport {
  long depth = 0;
  std::vector<Rat> mass;        // m_n, n = 1..depth
  std::vector<Rat> increments;  // theorem series terms, n = 1..depth-1
  std::vector<CriterionRow> criteria;
  ExtensionVerdict verdict = ExtensionVerdict::Inconclusive;
  std::vector<std::string> conflicts;
  std::string basis;
};

ExtensionReport extension_partial(const DiagramSpec& spec, const Subdiagram& sub,
                                  const MeasureFamily& pbar, long depth);

/// The five vertex-subdiagram finiteness series: the equivalent increment
/// series, two necessary conditions and two sufficient conditions built from
/// the stochastic matrices.
std::vector<CriterionRow> vertex_criteria(const DiagramSpec& spec, const VertexSubdiagram& sub,
                                          const MeasureFamily& pbar, long depth);

/// Edge-subdiagram criteria: the equivalent removed-edge series and the
/// sufficient row-max series.
std::vector<CriterionRow> edge_criteria(const DiagramSpec& spec, const EdgeSubdiagram& sub,
                                        const MeasureFamily& pbar, long depth);

/// Equal-row-sum parent with an equal-column-sum edge subdiagram: builds the
/// canonical subdiagram measure internally and emits the closed-form series
/// r_0⋯r_{n-1}/(c̄_0⋯c̄_n) · Σ f̃. Term-by-term equal to edge_criteria on the
/// same inputs.
struct ErsEcsReport {
  std::vector<CriterionRow> criteria;
  ExtensionVerdict verdict = ExtensionVerdict::Inconclusive;
  std::string basis;
};
ErsEcsReport ers_ecs_criterion(const DiagramSpec& spec, const EdgeSubdiagram& sub, long depth);

/// For a 2x2 equal-row-sum diagram and a singleton vertex track (w_n): the
/// odometer-extension series f_{w_{n+1}, v'_n}/r_n. Finite extension of the
/// odometer measure iff the series converges. When it converges exactly, the
/// full vertex criteria table is attached for cross-validation.
struct OdometerCheckReport {
  CriterionRow row;
  ExtensionVerdict verdict = ExtensionVerdict::Inconclusive;
  std::vector<CriterionRow> cross_validation;  // filled on exact-finite
};
OdometerCheckReport rank2_odometer_check(const DiagramSpec& spec, const SupportsBody& track,
                                         long depth);

/// First level with extension mass above the threshold, plus the per-level
/// lower bounds min_w (h_w/h̄_w) · (subdiagram mass) that drive the
/// thin-subdiagram blowup mechanism.
struct WitnessReport {
  std::optional<long> witness_level;
  std::vector<Rat> mass;
  std::vector<Rat> lower_bounds;
};
WitnessReport thin_implies_infinite_check(const DiagramSpec& spec, const Subdiagram& sub,
                                          const MeasureFamily& pbar, long depth, const Rat& bound);

}  // namespace adic
