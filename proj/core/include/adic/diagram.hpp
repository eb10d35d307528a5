#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adic/matrix.hpp"
#include "adic/seq_expr.hpp"

namespace adic {

// ---------------------------------------------------------------------------
// Diagram bodies. A Bratteli diagram is the root vector F_0 (edge counts from
// the top vertex into level 1) plus a rule producing the incidence matrix F_n
// for every level n >= 1.

struct ExplicitBody {
  std::vector<IntMatrix> matrices;  // matrices[i] = F_{i+1}
};

struct StationaryBody {
  IntMatrix matrix;
};

/// Level n uses prefix[n-1] for n <= |prefix|, then
/// cycle[(n - |prefix| - 1) mod |cycle|].
struct PeriodicBody {
  std::vector<IntMatrix> prefix;
  std::vector<IntMatrix> cycle;
};

/// Named generator from the closed catalogue:
///   odometer(steps)            1x1 matrices (steps_n)
///   allones(sizes)             all-ones |V_{n+1}| x |V_n|, |V_n| = sizes(n)
///   rank2-ers(a, b, c, d)      [[a_n, c_n], [d_n, b_n]], rows both sum to r_n
///   ecs-lastcol2(sizes)        all-ones with the last column doubled
///   embedded-odometer(a)       [[a_n,1..1],[0,1..1],..,[1,1..1]], ECS(a_n+1)
/// Parameters are level sequences (rational functions of n with geometric
/// factors, optionally periodic by level) that must evaluate to non-negative
/// integers at every used level.
struct FamilyBody {
  std::string name;
  std::map<std::string, SymbolicSeq> params;
};

using DiagramBody = std::variant<ExplicitBody, StationaryBody, PeriodicBody, FamilyBody>;

class DiagramSpec {
 public:
  DiagramSpec(std::vector<Int> root, DiagramBody body);

  const std::vector<Int>& root() const { return root_; }
  const DiagramBody& body() const { return body_; }

  /// |V_n| for n >= 1.
  size_t vertex_count(long n) const;

  /// F_n for n >= 1. Throws Error("level-out-of-range") past the end of an
  /// Explicit body and Error("non-integer-family-entry") when a family
  /// parameter fails integrality.
  IntMatrix matrix_at(long n) const;

  /// Largest usable matrix level for Explicit bodies; nullopt otherwise.
  std::optional<long> max_level() const;

 private:
  std::vector<Int> root_;
  DiagramBody body_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;  // dimension-mismatch | zero-row | zero-column |
                     // non-integer-family-entry | bad-root | level-out-of-range
  long level = 0;
  long row = -1;
  long col = -1;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Checks all structural invariants for levels 1..depth: the dimension
/// chain, no zero row/column at any level, positive root, and integrality of
/// family entries.
ValidationReport validate(const DiagramSpec& spec, long depth);

// ---------------------------------------------------------------------------
// Heights and stochastic matrices

/// h^{(level)}: exact path counts from the top vertex, h^{(1)} = root,
/// h^{(n+1)} = F_n h^{(n)}.
std::vector<Int> heights(const DiagramSpec& spec, long level);

/// Heights for levels 1..depth in one pass; out[i] is level i+1.
std::vector<std::vector<Int>> heights_up_to(const DiagramSpec& spec, long depth);

struct StochasticMatrix {
  long level = 1;
  RatMatrix entries;  // q_{v,w} = f_{v,w} h_w / h'_v, rows sum to 1 exactly
};

StochasticMatrix stochastic_at(const DiagramSpec& spec, long n);

// ---------------------------------------------------------------------------
// Telescoping

/// Contract the diagram to the given levels (strictly increasing, starting
/// at 1). The i-th new incidence matrix is the ordered product of the
/// original matrices between consecutive retained levels; heights at
/// retained levels are preserved exactly. The result carries an Explicit
/// body truncated at max(levels).
DiagramSpec telescope(const DiagramSpec& spec, std::span<const long> levels);

// ---------------------------------------------------------------------------
// Equal row / column sums

struct SumCheckReport {
  bool ok = false;
  long violation_level = -1;  // first violating level (0 = root) when !ok
  std::vector<Int> sums;      // sums[n] = common sum at level n, n = 0..depth
};

/// Equal row sums r_n per level. Level 0 is the root vector, whose "rows"
/// are its entries, so the root must be constant for the diagram to qualify.
SumCheckReport ers_check(const DiagramSpec& spec, long depth);

/// Equal column sums c_n of F_n for n >= 1; c_0 is the total root edge
/// count (the level-0 matrix has a single column).
SumCheckReport ecs_check(const DiagramSpec& spec, long depth);

// ---------------------------------------------------------------------------
// Symbolic structure, consumed by the series classifier.

struct SymbolicProfile {
  std::optional<SymbolicSeq> size;       // |V_n|
  std::optional<SymbolicSeq> row_sum;    // r_n, n >= 1
  std::optional<SymbolicSeq> col_sum;    // c_n, n >= 1
  std::optional<SymbolicSeq> entry_sum;  // Σ_{v,w} f^{(n)}_{v,w}
  std::optional<std::array<SymbolicSeq, 4>> rank2_entries;  // a, c, d, b

  /// When set, h^{(n)}_v = root_v · Π_{k=1}^{n-1} step(k) exactly from
  /// level valid_from of the step sequence on.
  std::optional<SymbolicSeq> height_step;
  /// height_step present, root constant: heights are constant per level.
  bool heights_uniform = false;
};

SymbolicProfile symbolic_profile(const DiagramSpec& spec);

}  // namespace adic
