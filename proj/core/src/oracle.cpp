#include "adic/oracle.hpp"

#include <algorithm>
#include <random>

namespace adic {

std::vector<Int> PathTable::counts_at(long n) const {
  if (n < 1 || n > depth) throw Error("level-out-of-range", "no paths at requested level");
  const auto& paths = levels[static_cast<size_t>(n - 1)];
  size_t size = 0;
  for (const auto& p : paths) size = std::max(size, p.back().target + 1);
  std::vector<Int> counts(size, Int(0));
  for (const auto& p : paths) counts[p.back().target] += 1;
  return counts;
}

PathTable enumerate_paths(const DiagramSpec& spec, long depth, std::uint64_t budget) {
  auto hs = heights_up_to(spec, depth);
  Int total(0);
  for (const auto& level : hs)
    for (const auto& h : level) total += h;
  if (total > Int(static_cast<unsigned long>(budget)))
    throw Error("budget-exceeded", "enumeration would produce " + total.get_str() +
                                       " paths, budget " + std::to_string(budget));

  PathTable table;
  table.depth = depth;
  table.levels.resize(static_cast<size_t>(depth));

  // level 1: root edge bundles
  for (size_t v = 0; v < spec.root().size(); ++v)
    for (Int e(0); e < spec.root()[v]; ++e)
      table.levels[0].push_back(Path{PathStep{0, v, e}});

  for (long n = 2; n <= depth; ++n) {
    IntMatrix f = spec.matrix_at(n - 1);
    auto& out = table.levels[static_cast<size_t>(n - 1)];
    for (const Path& p : table.levels[static_cast<size_t>(n - 2)]) {
      const size_t w = p.back().target;
      for (size_t v = 0; v < f.rows(); ++v)
        for (Int e(0); e < f.at(v, w); ++e) {
          Path next = p;
          next.push_back(PathStep{w, v, e});
          out.push_back(std::move(next));
        }
    }
    // lexicographic by (vertex chain, edge indices): enumeration above walks
    // parents in order and targets in order, so re-sort by target chain
    std::stable_sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].target != b[i].target) return a[i].target < b[i].target;
        if (a[i].edge_index != b[i].edge_index) return a[i].edge_index < b[i].edge_index;
      }
      return false;
    });
  }
  return table;
}

namespace {

bool path_in_sub(const Subdiagram& sub, const Path& path) {
  if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
    for (size_t i = 0; i < path.size(); ++i) {
      const std::vector<size_t> w = vs->support_at(static_cast<long>(i) + 1);
      if (!std::binary_search(w.begin(), w.end(), path[i].target)) return false;
    }
    return true;
  }
  const auto& es = std::get<EdgeSubdiagram>(sub);
  if (path[0].edge_index >= es.root()[path[0].target]) return false;
  for (size_t i = 1; i < path.size(); ++i) {
    IntMatrix fbar = es.matrix_at(static_cast<long>(i));
    if (path[i].edge_index >= fbar.at(path[i].target, path[i].source)) return false;
  }
  return true;
}

}  // namespace

Rat brute_measure_mass(const DiagramSpec& spec, const PathTable& table, const MeasureFamily& mu,
                       long n, const PathFilter& filter) {
  if (n < 1 || n > table.depth || n > mu.depth())
    throw Error("depth-mismatch", "path table or measure family too shallow");
  (void)spec;
  const auto& pv = mu.at_level(n).values;
  Rat mass(0);
  for (const Path& p : table.levels[static_cast<size_t>(n - 1)]) {
    const size_t target = p.back().target;
    bool keep = true;
    switch (filter.kind) {
      case PathFilter::Kind::All: break;
      case PathFilter::Kind::FirstEdgesInSub:
        keep = filter.sub && path_in_sub(*filter.sub, p);
        break;
      case PathFilter::Kind::RangeInSet:
        keep = std::find(filter.range_set.begin(), filter.range_set.end(), target) !=
               filter.range_set.end();
        break;
    }
    if (keep) mass += pv[target];
  }
  return mass;
}

IntMatrix counts_between(const DiagramSpec& spec, long m, long N) {
  if (!(1 <= m && m < N)) throw Error("level-out-of-range", "counts_between needs 1 <= m < N");
  IntMatrix prod = spec.matrix_at(m);
  for (long n = m + 1; n < N; ++n) prod = multiply(spec.matrix_at(n), prod);
  return prod;  // entry (v, w) = |E(w, v)|
}

MeasureFamily random_measure(const DiagramSpec& spec, long depth, std::uint64_t seed) {
  const size_t size = spec.vertex_count(depth);
  std::mt19937_64 gen(seed);
  constexpr std::uint64_t kBound = 1000;  // numerators/denominators in [., kBound]
  std::vector<Rat> raw(size);
  bool any_positive = false;
  for (auto& x : raw) {
    const std::uint64_t num = gen() % (kBound + 1);
    const std::uint64_t den = 1 + gen() % kBound;
    x = Rat(Int(static_cast<unsigned long>(num)), Int(static_cast<unsigned long>(den)));
    x.canonicalize();
    any_positive = any_positive || x > 0;
  }
  if (!any_positive) raw[0] = 1;

  // normalize to level mass 1: Σ h_v x_v = 1
  auto h = heights(spec, depth);
  Rat mass(0);
  for (size_t v = 0; v < size; ++v) mass += Rat(h[v]) * raw[v];
  for (auto& x : raw) x /= mass;
  return family_from_top(spec, MeasureVector{depth, std::move(raw)});
}

MeasureFamily extreme_measure(const DiagramSpec& spec, long depth, size_t vertex) {
  const size_t size = spec.vertex_count(depth);
  if (vertex >= size) throw Error("level-out-of-range", "extreme vertex out of range");
  auto h = heights(spec, depth);
  std::vector<Rat> top(size, Rat(0));
  top[vertex] = Rat(1, h[vertex]);
  top[vertex].canonicalize();
  return family_from_top(spec, MeasureVector{depth, std::move(top)});
}

}  // namespace adic
