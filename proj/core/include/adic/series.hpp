#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adic/seq_expr.hpp"

namespace adic {

/// Outcome of a convergence question. Exact verdicts are proved by the
/// symbolic classifier; Likely verdicts come from windowed numeric tests
/// whose parameters are recorded alongside.
enum class Classification {
  ExactConvergent,
  ExactDivergent,
  LikelyConvergent,
  LikelyDivergent,
  Inconclusive,
};

bool is_exact(Classification c);
bool is_convergent_signal(Classification c);
bool is_divergent_signal(Classification c);
std::string to_string(Classification c);

enum class ProductClass { PositiveLimit, ZeroLimit, InfiniteLimit };

/// Symbolic classification of Σ_{n >= from} |t(n)| for a term sequence in
/// the decidable class (quotients of exponential polynomials, interleaved
/// periodically). Decision rule on the dominant form R(n)·β^n: converges iff
/// β < 1, or β = 1 and deg num <= deg den - 2. nullopt when certification of
/// the dominant form exceeds its budget.
std::optional<bool> classify_series_convergent(const SymbolicSeq& term);

/// Π_{n >= from} factor(n) for a sequence that is eventually positive.
/// PositiveLimit means the product converges to a positive value.
std::optional<ProductClass> classify_product(const SymbolicSeq& factor);

/// Σ t(n) for positive terms given only through their symbolic step ratio
/// t(n+1)/t(n). Handles geometric-type terms that are not themselves in the
/// classifier's class (e.g. ratios of level products). Ratio-limit rule plus
/// the Gauss refinement at limit 1.
std::optional<bool> classify_series_by_ratio_convergent(const SymbolicSeq& ratio);

/// Parameters of the windowed numeric fallback; embedded in reports so that
/// every Likely verdict names its window and thresholds.
struct HeuristicParams {
  int window = 16;
  Rat geometric_threshold = Rat(97, 100);  // max tail ratio counted as contraction
  Rat divergence_floor = Rat(1, 1000000);  // tail terms above this suggest divergence
};

struct HeuristicOutcome {
  Classification classification = Classification::Inconclusive;
  HeuristicParams params;
  std::string detail;
};

/// Windowed ratio / tail tests over exactly computed terms. Never returns an
/// Exact classification.
HeuristicOutcome heuristic_series(std::span<const Rat> terms, HeuristicParams params = {});

/// Combined verdict: symbolic result when available, else heuristics.
struct SeriesAnalysis {
  Classification classification = Classification::Inconclusive;
  bool symbolic = false;
  std::optional<HeuristicOutcome> heuristic;  // present when heuristics ran
  std::string note;
};

SeriesAnalysis analyze_series(const std::optional<SymbolicSeq>& symbolic_term,
                              std::span<const Rat> terms, HeuristicParams params = {});

}  // namespace adic
