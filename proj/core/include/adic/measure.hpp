#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adic/diagram.hpp"
#include "adic/series.hpp"

namespace adic {

/// Cylinder values p^{(level)}_v of an invariant measure: the measure of one
/// finite path from the top vertex into v. Non-negative exact rationals.
struct MeasureVector {
  long level = 1;
  std::vector<Rat> values;
};

/// Optional closed form p^{(n)}_v = level1_v · Π_{k=1}^{n-1} step(k). For the
/// canonical equal-column-sum measure the values are uniform per level and
/// step(k) = 1/c_k. Drives the symbolic verdict machinery.
struct GeometricMeasureProfile {
  std::vector<Rat> level1;
  SymbolicSeq step;
  bool uniform = false;  // all vertices share one value at every level
};

/// Compatible family p^{(n)} = F_n^T p^{(n+1)} truncated at some depth.
class MeasureFamily {
 public:
  MeasureFamily() = default;
  MeasureFamily(std::vector<MeasureVector> levels,
                std::optional<GeometricMeasureProfile> profile = std::nullopt);

  long depth() const { return static_cast<long>(levels_.size()); }
  const MeasureVector& at_level(long n) const;
  const std::vector<MeasureVector>& levels() const { return levels_; }
  const std::optional<GeometricMeasureProfile>& profile() const { return profile_; }

 private:
  std::vector<MeasureVector> levels_;
  std::optional<GeometricMeasureProfile> profile_;
};

/// F_n^T applied to a level-(n+1) vector; exact, preserves Σ h·p.
MeasureVector propagate_down(const DiagramSpec& spec, const MeasureVector& upper);

/// Σ_v h^{(n)}_v p^{(n)}_v.
Rat level_mass(const DiagramSpec& spec, const MeasureVector& p);

/// Extend a top vector at some level into the compatible family on levels
/// 1..top.level.
MeasureFamily family_from_top(const DiagramSpec& spec, MeasureVector top);

/// Verifies p^{(n)} = F_n^T p^{(n+1)} exactly for every adjacent pair.
bool is_compatible(const DiagramSpec& spec, const MeasureFamily& family);

/// The canonical measure of an equal-column-sum diagram:
/// p^{(n)}_v = 1/(c_0 ⋯ c_{n-1}) with c_0 the total root edge count.
/// Throws Error("not-ecs") when a level <= depth violates ECS.
MeasureFamily uniform_ecs_measure(const DiagramSpec& spec, long depth);

// ---------------------------------------------------------------------------
// Nested simplex of measure vectors

/// Extreme points of the level-base image of the level-N vertex simplex
/// under the transposed incidence chain, tagged by their source vertex.
struct SimplexState {
  long base_level = 1;
  long depth = 0;  // N: extreme points are images of level-N vertex measures
  std::vector<MeasureVector> extreme_points;  // at base_level, one per level-N vertex
  std::vector<size_t> sources;
  std::vector<Rat> step_diameters;  // L1 diameter after 0, 1, .. contractions
};

SimplexState simplex_contract(const DiagramSpec& spec, long to_depth, long base_level = 1);

/// Max pairwise L1 distance of the extreme points.
Rat simplex_diameter(std::span<const MeasureVector> points);

// ---------------------------------------------------------------------------
// Counting ergodic measures on finite-rank diagrams

/// The level-n volume-contraction determinant of an equal-row-sum diagram of
/// rank k: det of the k x k matrix whose first k-1 columns are f_{·,j}/r_n
/// and whose last column is all ones. Throws Error("not-ers").
Rat z_determinant(const DiagramSpec& spec, long n);

enum class CountMode { Determinant, Diameter, Auto };

struct ErgodicCountReport {
  long depth = 0;
  size_t rank = 0;  // number of vertices per level at the working depth
  CountMode mode = CountMode::Auto;
  std::vector<Rat> z_values;          // determinant mode
  Rat partial_product = Rat(1);       // Π |z| (or Π step ratios)
  Rat diameter = Rat(0);              // exact simplex diameter at depth
  std::vector<long> singular_levels;  // prefix levels excluded from the tail
  enum class Kind { Exact, LowerBound, Heuristic } kind = Kind::Heuristic;
  int count = 1;
  bool symbolic = false;
  std::optional<HeuristicOutcome> heuristic;
  std::string note;
};

ErgodicCountReport count_ergodic(const DiagramSpec& spec, long depth,
                                 CountMode mode = CountMode::Auto);

/// Complete classification for 2x2 equal-row-sum diagrams, with the two
/// split series and, in the two-measure case, the supporting odometer vertex
/// tracks. Throws Error("not-rank2") / Error("not-ers").
struct Rank2Report {
  long depth = 0;
  std::vector<Rat> gap_terms;    // 1 - |a_n - d_n|/r_n
  std::vector<Rat> major_terms;  // 1 - max{a_n, d_n}/r_n
  std::vector<Rat> minor_terms;  // min{a_n, d_n}/r_n
  Classification gap_cls = Classification::Inconclusive;
  Classification major_cls = Classification::Inconclusive;
  Classification minor_cls = Classification::Inconclusive;
  ErgodicCountReport::Kind kind = ErgodicCountReport::Kind::Heuristic;
  int count = 1;
  std::vector<std::vector<size_t>> odometer_tracks;  // two disjoint tracks when count == 2
  bool symbolic = false;
  std::optional<HeuristicOutcome> heuristic;
  std::string note;
};

Rank2Report rank2_ers_classify(const DiagramSpec& spec, long depth);

// ---------------------------------------------------------------------------
// Stationary Perron-Frobenius data

struct PerronResult {
  double lambda = 0;
  std::vector<double> eigenvector;  // normalized so Σ root_v x_v = 1
  int iterations = 0;
  bool damped = false;  // (A + I) iteration was needed
};

/// Power iteration on A = F^T for a stationary diagram with irreducible
/// matrix. The returned vector yields cylinder values p^{(n)}_v = x_v /
/// λ^{n-1}. Throws Error("not-stationary") / Error("reducible") /
/// Error("no-convergence").
PerronResult stationary_pf(const DiagramSpec& spec, double tol, int max_iterations = 50000);

}  // namespace adic
