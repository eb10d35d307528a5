#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adic/diagram.hpp"
#include "adic/measure.hpp"

namespace adic {

// ---------------------------------------------------------------------------
// Vertex subdiagrams: per-level vertex subsets W_n with all edges between
// them. Supports share the diagram bodies' tail-rule machinery.

/// Named selectors: "first-vertex" (W_n = {0}), "all-but-first"
/// (W_n = V_n \ {0}), "diagonal-track" (constant singleton {vertex}).
struct SelectorSupports {
  std::string name;
  size_t vertex = 0;
};

struct StationarySupports {
  std::vector<size_t> set;
};

/// Same level convention as PeriodicBody.
struct PeriodicSupports {
  std::vector<std::vector<size_t>> prefix;
  std::vector<std::vector<size_t>> cycle;
};

struct ExplicitSupports {
  std::vector<std::vector<size_t>> sets;  // sets[i] = W_{i+1}
};

using SupportsBody =
    std::variant<SelectorSupports, StationarySupports, PeriodicSupports, ExplicitSupports>;

/// All-singleton constant/periodic support patterns (odometer vertex
/// tracks): vertex[r] is the selected vertex at levels n ≡ r (mod period).
struct TrackPattern {
  unsigned period = 1;
  std::vector<size_t> vertex;
};
std::optional<TrackPattern> track_pattern(const SupportsBody& supports);

class VertexSubdiagram {
 public:
  VertexSubdiagram(DiagramSpec parent, SupportsBody supports);

  const DiagramSpec& parent() const { return parent_; }
  const SupportsBody& supports() const { return supports_; }

  /// W_n, sorted and deduplicated; throws Error("empty-support") /
  /// Error("bad-support") on malformed data.
  std::vector<size_t> support_at(long n) const;
  std::vector<size_t> complement_at(long n) const;  // W'_n

  /// Restricted incidence block F_n[W_{n+1}, W_n].
  IntMatrix block_at(long n) const;

 private:
  DiagramSpec parent_;
  SupportsBody supports_;
};

// ---------------------------------------------------------------------------
// Edge subdiagrams: all vertices kept, a dominated matrix F̄_n <= F_n of
// retained edges per level, with the support condition
// f_{v,w} > 0 => f̄_{v,w} > 0. The optional root override is the level-0
/// column (retained root edges), defaulting to the parent root.

class EdgeSubdiagram {
 public:
  EdgeSubdiagram(DiagramSpec parent, DiagramBody matrices,
                 std::optional<std::vector<Int>> root = std::nullopt);

  const DiagramSpec& parent() const { return parent_; }
  const std::vector<Int>& root() const { return sub_spec_.root(); }
  IntMatrix matrix_at(long n) const;   // F̄_n
  IntMatrix removed_at(long n) const;  // F̃_n = F_n - F̄_n

  /// The subdiagram viewed as a standalone diagram (root, matrices).
  const DiagramSpec& as_spec() const { return sub_spec_; }

 private:
  DiagramSpec parent_;
  DiagramSpec sub_spec_;
};

using Subdiagram = std::variant<VertexSubdiagram, EdgeSubdiagram>;

const DiagramSpec& parent_of(const Subdiagram& sub);
bool is_vertex(const Subdiagram& sub);

/// Vertices of the subdiagram at level n, in parent coordinates (W_n for
/// vertex subdiagrams, all of V_n for edge subdiagrams).
std::vector<size_t> sub_vertices_at(const Subdiagram& sub, long n);

// ---------------------------------------------------------------------------
// Validation

struct SubValidationReport {
  bool ok = true;
  std::vector<Violation> violations;  // empty-support | disconnected-block |
                                      // support-violation | not-dominated | bad-support
  long proper_levels = 0;   // edge subs: levels <= depth with F̄_n < F_n
  bool proper_seen = false;
};

SubValidationReport validate_sub(const Subdiagram& sub, long depth);

// ---------------------------------------------------------------------------
// Heights

/// h̄^{(n)} over the subdiagram's own vertex list (support order for vertex
/// subdiagrams, V_n for edge subdiagrams).
std::vector<Int> sub_heights(const Subdiagram& sub, long n);

/// h̄^{(n)} embedded in parent coordinates, zero off the support.
std::vector<Int> sub_heights_embedded(const Subdiagram& sub, long n);

// ---------------------------------------------------------------------------
// Materialized / symbolic standalone views of the subdiagram

/// Explicit truncation usable as an ordinary diagram (oracle work, random
/// measures on the subdiagram).
DiagramSpec sub_spec_explicit(const Subdiagram& sub, long depth);

/// Structure-preserving standalone spec for symbolic analysis (named
/// selectors on families, constant blocks of stationary parents, edge-sub
/// bodies). nullopt when no symbolic form is available.
std::optional<DiagramSpec> sub_spec_symbolic(const Subdiagram& sub);

/// Complement vertex subdiagram on W'_n. Needs the complements non-empty to
/// the given depth; throws Error("empty-complement").
VertexSubdiagram complement(const VertexSubdiagram& sub, long depth);

// ---------------------------------------------------------------------------
// Measure of the subdiagram's path space

enum class MeasureLimitVerdict {
  ExactZero,
  ExactPositive,
  LikelyZero,
  LikelyPositive,
  Inconclusive,
};
std::string to_string(MeasureLimitVerdict v);

struct SubspaceMeasureReport {
  long depth = 0;
  std::vector<Rat> level_measures;  // μ(Y^{(n)}), n = 1..depth
  std::vector<Rat> terms;           // term_n = μ(Y^{(n)}) - μ(Y^{(n+1)})
  std::vector<Rat> partial_sums;
  MeasureLimitVerdict verdict = MeasureLimitVerdict::Inconclusive;
  Rat lower = Rat(0), upper = Rat(1);  // bracket for μ(X̄)
  bool symbolic = false;
  std::optional<HeuristicOutcome> heuristic;
  std::string note;
};

/// μ(Y^{(n)}) = Σ_{w} h̄_w p_w with the level identity
/// μ(Y^{(n+1)}) = μ(Y^{(n)}) - term_n held exactly; mu is a measure on the
/// parent diagram, compatible to depth.
SubspaceMeasureReport subspace_measure(const DiagramSpec& spec, const Subdiagram& sub,
                                       const MeasureFamily& mu, long depth);

// ---------------------------------------------------------------------------
// Thinness

enum class ThinnessVerdict { ExactThin, ExactNotThin, LikelyThin, LikelyNotThin, Inconclusive };
std::string to_string(ThinnessVerdict v);

struct ThinnessReport {
  long depth = 0;
  std::vector<Rat> max_ratios;  // max_w h̄_w/h_w per level over sub vertices
  std::vector<Rat> min_ratios;
  ThinnessVerdict verdict = ThinnessVerdict::Inconclusive;
  bool symbolic = false;
  bool simplicity_proxy = false;  // telescoped incidence product positive at depth
  std::optional<HeuristicOutcome> heuristic;
  std::string note;
};

ThinnessReport thinness(const DiagramSpec& spec, const Subdiagram& sub, long depth);

}  // namespace adic
