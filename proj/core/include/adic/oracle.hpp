#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adic/measure.hpp"
#include "adic/subdiagram.hpp"

namespace adic {

/// One finite path from the top vertex: per level the target vertex and the
/// index of the parallel edge taken (edge_index < multiplicity).
struct PathStep {
  size_t source = 0;
  size_t target = 0;
  Int edge_index;
};

using Path = std::vector<PathStep>;

/// Exhaustively enumerated paths, per level. Counts must equal the heights;
/// the enumeration order is lexicographic in (vertex chain, edge indices).
struct PathTable {
  long depth = 0;
  std::vector<std::vector<Path>> levels;  // levels[n-1] = all paths to level n

  std::vector<Int> counts_at(long n) const;  // per-vertex path counts
};

/// Enumerates every finite path to each level 1..depth. The total number of
/// paths across levels is pre-checked against the budget via heights;
/// exceeding it throws Error("budget-exceeded") carrying the estimate.
PathTable enumerate_paths(const DiagramSpec& spec, long depth, std::uint64_t budget);

/// Path filters for brute measure summation.
struct PathFilter {
  enum class Kind { All, FirstEdgesInSub, RangeInSet } kind = Kind::All;
  const Subdiagram* sub = nullptr;     // FirstEdgesInSub
  std::vector<size_t> range_set;       // RangeInSet
};

/// Σ over level-n paths passing the filter of p^{(n)}_{range(path)}.
/// An edge subdiagram retains the first f̄ parallel copies of each bundle.
Rat brute_measure_mass(const DiagramSpec& spec, const PathTable& table, const MeasureFamily& mu,
                       long n, const PathFilter& filter = {});

/// |E(w, v)| for w at level m, v at level N > m, as the matrix product
/// F_{N-1} ⋯ F_m read as path counts; entry (v, w).
IntMatrix counts_between(const DiagramSpec& spec, long m, long N);

/// Deterministic compatible probability family: draws a non-negative
/// rational vector at the given level as ratios of bounded random integers,
/// normalizes to level mass 1, and propagates down.
MeasureFamily random_measure(const DiagramSpec& spec, long depth, std::uint64_t seed);

/// The degenerate top vector concentrated on one vertex (the simplex
/// extreme point), propagated into a family.
MeasureFamily extreme_measure(const DiagramSpec& spec, long depth, size_t vertex);

}  // namespace adic
