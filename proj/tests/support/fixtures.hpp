#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adic/diagram.hpp"
#include "adic/oracle.hpp"
#include "adic/subdiagram.hpp"

namespace adic::testing {

inline IntMatrix mat2(long a, long c, long d, long b) {
  IntMatrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = c;
  m.at(1, 0) = d;
  m.at(1, 1) = b;
  return m;
}

inline DiagramSpec stationary_sym2() {  // [[2,1],[1,2]], root (1,1): ERS(3), ECS(3)
  return DiagramSpec({Int(1), Int(1)}, StationaryBody{mat2(2, 1, 1, 2)});
}

inline SymbolicSeq expr(const std::string& text) { return SymbolicSeq(parse_seq_expr(text), 0); }

inline DiagramSpec rank2_family(const std::string& a, const std::string& b, const std::string& c,
                                const std::string& d) {
  return DiagramSpec({Int(1), Int(1)},
                     FamilyBody{"rank2-ers",
                                {{"a", expr(a)}, {"b", expr(b)}, {"c", expr(c)}, {"d", expr(d)}}});
}

inline DiagramSpec squares_family() { return rank2_family("n^2", "n^2", "1", "1"); }
inline DiagramSpec linear_family() { return rank2_family("n", "n", "1", "1"); }

/// Alternating 2x2 family with a_m = 2^(m+1) advancing every two levels:
/// odd levels n = 2m+1 carry [[2, a_m],[a_m/2+1, a_m/2+1]] and even levels
/// n = 2m carry [[a_m/2+1, a_m/2+1],[a_m, 2]]; both rows sum to a_m + 2.
inline DiagramSpec alternating_family() {
  auto periodic = [](const std::string& even_case, const std::string& odd_case) {
    return SymbolicSeq(2, {parse_seq_expr(even_case), parse_seq_expr(odd_case)}, 1);
  };
  return DiagramSpec({Int(1), Int(1)},
                     FamilyBody{"rank2-ers",
                                {{"a", periodic("2^n+1", "2")},
                                 {"c", periodic("2^n+1", "2*2^n")},
                                 {"d", periodic("2*2^n", "2^n+1")},
                                 {"b", periodic("2", "2^n+1")}}});
}

/// Constant-shape 2x2 family [[2, 2^n],[2^(n-1)+1, 2^(n-1)+1]].
inline DiagramSpec top_heavy_family() {
  return rank2_family("2", "(1/2)*2^n+1", "2^n", "(1/2)*2^n+1");
}

inline DiagramSpec allones_family(const std::string& sizes, long root_count, long root_value = 1) {
  std::vector<Int> root(static_cast<size_t>(root_count), Int(root_value));
  return DiagramSpec(std::move(root), FamilyBody{"allones", {{"sizes", expr(sizes)}}});
}

inline DiagramSpec lastcol2_family(const std::string& sizes, long root_count) {
  std::vector<Int> root(static_cast<size_t>(root_count), Int(2));
  return DiagramSpec(std::move(root), FamilyBody{"ecs-lastcol2", {{"sizes", expr(sizes)}}});
}

inline DiagramSpec embedded_odometer_family(const std::string& a) {
  return DiagramSpec({Int(1), Int(1)}, FamilyBody{"embedded-odometer", {{"a", expr(a)}}});
}

inline DiagramSpec odometer_family(const std::string& steps) {
  return DiagramSpec({Int(1)}, FamilyBody{"odometer", {{"steps", expr(steps)}}});
}

// ---------------------------------------------------------------------------
// Random small instances (deterministic per seed): <= 4 vertices per level,
// <= 6 levels, entries <= 3 with zero rows/columns repaired.

struct RandomSpecParams {
  long max_levels = 6;
  size_t max_vertices = 4;
  long max_entry = 3;
  long max_root = 3;
};

inline DiagramSpec random_spec(std::mt19937_64& gen, const RandomSpecParams& params = {}) {
  auto pick = [&gen](size_t lo, size_t hi) { return lo + gen() % (hi - lo + 1); };
  const long levels = static_cast<long>(pick(2, static_cast<size_t>(params.max_levels)));
  std::vector<size_t> sizes;
  for (long n = 0; n <= levels; ++n) sizes.push_back(pick(1, params.max_vertices));
  std::vector<Int> root;
  for (size_t v = 0; v < sizes[0]; ++v)
    root.push_back(Int(static_cast<unsigned long>(pick(1, static_cast<size_t>(params.max_root)))));
  ExplicitBody body;
  for (long n = 1; n <= levels; ++n) {
    IntMatrix m(sizes[static_cast<size_t>(n)], sizes[static_cast<size_t>(n - 1)]);
    for (size_t r = 0; r < m.rows(); ++r)
      for (size_t c = 0; c < m.cols(); ++c)
        m.at(r, c) = Int(static_cast<unsigned long>(pick(0, static_cast<size_t>(params.max_entry))));
    // repair zero rows/columns to keep the structural invariants
    for (size_t r = 0; r < m.rows(); ++r)
      if (auto z = m.zero_row()) m.at(*z, gen() % m.cols()) = 1;
    for (size_t c = 0; c < m.cols(); ++c)
      if (auto z = m.zero_column()) m.at(gen() % m.rows(), *z) = 1;
    body.matrices.push_back(std::move(m));
  }
  return DiagramSpec(std::move(root), std::move(body));
}

/// Random proper vertex subdiagram with connected blocks; supports chosen by
/// growing each level's set from a random seed vertex along positive edges.
inline std::optional<VertexSubdiagram> random_vertex_sub(const DiagramSpec& spec, long depth,
                                                         std::mt19937_64& gen) {
  std::vector<std::vector<size_t>> sets;
  for (long n = 1; n <= depth; ++n) {
    const size_t size = spec.vertex_count(n);
    std::vector<size_t> w;
    for (size_t v = 0; v < size; ++v)
      if (gen() % 2 == 0) w.push_back(v);
    if (w.empty()) w.push_back(gen() % size);
    sets.push_back(std::move(w));
  }
  // repair connectivity: every support vertex needs a parent and a child
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    auto& lo = sets[static_cast<size_t>(n - 1)];
    auto& hi = sets[static_cast<size_t>(n)];
    for (size_t v : hi) {
      bool has_parent = false;
      for (size_t w : lo) has_parent = has_parent || f.at(v, w) > 0;
      if (!has_parent) {
        for (size_t w = 0; w < f.cols(); ++w)
          if (f.at(v, w) > 0) {
            lo.push_back(w);
            break;
          }
      }
    }
    std::sort(lo.begin(), lo.end());
    lo.erase(std::unique(lo.begin(), lo.end()), lo.end());
    for (size_t w : lo) {
      bool has_child = false;
      for (size_t v : hi) has_child = has_child || f.at(v, w) > 0;
      if (!has_child) {
        for (size_t v = 0; v < f.rows(); ++v)
          if (f.at(v, w) > 0) {
            hi.push_back(v);
            break;
          }
      }
    }
    std::sort(hi.begin(), hi.end());
    hi.erase(std::unique(hi.begin(), hi.end()), hi.end());
  }
  VertexSubdiagram sub(spec, ExplicitSupports{sets});
  if (!validate_sub(Subdiagram{sub}, depth).ok) return std::nullopt;
  return sub;
}

/// Random edge subdiagram honoring domination and the support condition.
inline EdgeSubdiagram random_edge_sub(const DiagramSpec& spec, long depth, std::mt19937_64& gen) {
  std::vector<IntMatrix> mats;
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    IntMatrix fbar(f.rows(), f.cols());
    for (size_t r = 0; r < f.rows(); ++r)
      for (size_t c = 0; c < f.cols(); ++c) {
        if (f.at(r, c) == 0) continue;
        const unsigned long cap = f.at(r, c).get_ui();
        fbar.at(r, c) = Int(1 + gen() % cap);
      }
    mats.push_back(std::move(fbar));
  }
  std::vector<Int> root;
  for (const auto& r : spec.root()) root.push_back(Int(1 + gen() % r.get_ui()));
  return EdgeSubdiagram(spec, ExplicitBody{std::move(mats)}, std::move(root));
}

}  // namespace adic::testing
