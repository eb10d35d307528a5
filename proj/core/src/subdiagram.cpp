#include "adic/subdiagram.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace adic {

namespace {

std::vector<size_t> checked_set(std::vector<size_t> set, size_t level_size, long n) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.empty())
    throw Error("empty-support", "empty support at level " + std::to_string(n));
  if (set.back() >= level_size)
    throw Error("bad-support", "vertex " + std::to_string(set.back()) +
                                   " out of range at level " + std::to_string(n));
  return set;
}

}  // namespace

VertexSubdiagram::VertexSubdiagram(DiagramSpec parent, SupportsBody supports)
    : parent_(std::move(parent)), supports_(std::move(supports)) {
  if (const auto* sel = std::get_if<SelectorSupports>(&supports_)) {
    if (sel->name != "first-vertex" && sel->name != "all-but-first" &&
        sel->name != "diagonal-track")
      throw Error("bad-support", "unknown support selector '" + sel->name + "'");
  }
}

std::vector<size_t> VertexSubdiagram::support_at(long n) const {
  if (n < 1) throw Error("level-out-of-range", "supports start at level 1");
  const size_t size = parent_.vertex_count(n);
  if (const auto* sel = std::get_if<SelectorSupports>(&supports_)) {
    if (sel->name == "first-vertex") return {0};
    if (sel->name == "all-but-first") {
      if (size < 2)
        throw Error("empty-support", "all-but-first needs >= 2 vertices at level " + std::to_string(n));
      std::vector<size_t> out(size - 1);
      std::iota(out.begin(), out.end(), 1);
      return out;
    }
    // diagonal-track
    if (sel->vertex >= size)
      throw Error("bad-support", "track vertex out of range at level " + std::to_string(n));
    return {sel->vertex};
  }
  if (const auto* st = std::get_if<StationarySupports>(&supports_))
    return checked_set(st->set, size, n);
  if (const auto* pe = std::get_if<PeriodicSupports>(&supports_)) {
    const long np = static_cast<long>(pe->prefix.size());
    if (n <= np) return checked_set(pe->prefix[static_cast<size_t>(n - 1)], size, n);
    if (pe->cycle.empty()) throw Error("bad-support", "periodic supports with empty cycle");
    long idx = (n - np - 1) % static_cast<long>(pe->cycle.size());
    return checked_set(pe->cycle[static_cast<size_t>(idx)], size, n);
  }
  const auto& ex = std::get<ExplicitSupports>(supports_);
  if (static_cast<size_t>(n) > ex.sets.size())
    throw Error("level-out-of-range", "explicit supports end before level " + std::to_string(n));
  return checked_set(ex.sets[static_cast<size_t>(n - 1)], size, n);
}

std::vector<size_t> VertexSubdiagram::complement_at(long n) const {
  const size_t size = parent_.vertex_count(n);
  std::vector<size_t> w = support_at(n);
  std::vector<size_t> out;
  size_t j = 0;
  for (size_t v = 0; v < size; ++v) {
    if (j < w.size() && w[j] == v)
      ++j;
    else
      out.push_back(v);
  }
  return out;
}

IntMatrix VertexSubdiagram::block_at(long n) const {
  IntMatrix f = parent_.matrix_at(n);
  std::vector<size_t> lo = support_at(n), hi = support_at(n + 1);
  IntMatrix out(hi.size(), lo.size());
  for (size_t r = 0; r < hi.size(); ++r)
    for (size_t c = 0; c < lo.size(); ++c) out.at(r, c) = f.at(hi[r], lo[c]);
  return out;
}

EdgeSubdiagram::EdgeSubdiagram(DiagramSpec parent, DiagramBody matrices,
                               std::optional<std::vector<Int>> root)
    : parent_(std::move(parent)),
      sub_spec_(root ? std::move(*root) : parent_.root(), std::move(matrices)) {}

IntMatrix EdgeSubdiagram::matrix_at(long n) const { return sub_spec_.matrix_at(n); }

IntMatrix EdgeSubdiagram::removed_at(long n) const {
  IntMatrix f = parent_.matrix_at(n);
  IntMatrix fbar = sub_spec_.matrix_at(n);
  if (f.rows() != fbar.rows() || f.cols() != fbar.cols())
    throw Error("dimension-mismatch",
                "edge subdiagram matrix shape differs from parent at level " + std::to_string(n));
  IntMatrix out(f.rows(), f.cols());
  for (size_t r = 0; r < f.rows(); ++r)
    for (size_t c = 0; c < f.cols(); ++c) out.at(r, c) = f.at(r, c) - fbar.at(r, c);
  return out;
}

const DiagramSpec& parent_of(const Subdiagram& sub) {
  return std::visit([](const auto& s) -> const DiagramSpec& { return s.parent(); }, sub);
}

bool is_vertex(const Subdiagram& sub) { return std::holds_alternative<VertexSubdiagram>(sub); }

std::vector<size_t> sub_vertices_at(const Subdiagram& sub, long n) {
  if (const auto* v = std::get_if<VertexSubdiagram>(&sub)) return v->support_at(n);
  std::vector<size_t> all(parent_of(sub).vertex_count(n));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

SubValidationReport validate_sub(const Subdiagram& sub, long depth) {
  SubValidationReport rep;
  auto add = [&rep](std::string code, long level, long row, long col, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({std::move(code), level, row, col, std::move(msg)});
  };
  if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
    for (long n = 1; n <= depth; ++n) {
      std::vector<size_t> w;
      try {
        w = vs->support_at(n);
      } catch (const Error& e) {
        add(e.code(), n, -1, -1, e.what());
        return rep;
      }
      if (w.size() < vs->parent().vertex_count(n)) ++rep.proper_levels;
    }
    rep.proper_seen = rep.proper_levels > 0;
    for (long n = 1; n < depth; ++n) {
      IntMatrix block = vs->block_at(n);
      if (auto zr = block.zero_row())
        add("disconnected-block", n, static_cast<long>(*zr), -1,
            "support vertex at level " + std::to_string(n + 1) + " has no parent in the support");
      if (auto zc = block.zero_column())
        add("disconnected-block", n, -1, static_cast<long>(*zc),
            "support vertex at level " + std::to_string(n) + " has no child in the support");
    }
    return rep;
  }

  const auto& es = std::get<EdgeSubdiagram>(sub);
  // level 0: retained root edges
  if (es.root().size() != es.parent().root().size()) {
    add("dimension-mismatch", 0, -1, -1, "edge subdiagram root length differs from parent");
    return rep;
  }
  for (size_t v = 0; v < es.root().size(); ++v) {
    if (es.root()[v] > es.parent().root()[v])
      add("not-dominated", 0, static_cast<long>(v), -1, "more root edges retained than present");
    if (es.root()[v] < 1)
      add("support-violation", 0, static_cast<long>(v), -1, "root edge bundle dropped entirely");
  }
  if (es.root() != es.parent().root()) ++rep.proper_levels;
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = es.parent().matrix_at(n);
    IntMatrix fbar;
    try {
      fbar = es.matrix_at(n);
    } catch (const Error& e) {
      add(e.code(), n, -1, -1, e.what());
      return rep;
    }
    if (f.rows() != fbar.rows() || f.cols() != fbar.cols()) {
      add("dimension-mismatch", n, -1, -1, "edge subdiagram matrix shape differs from parent");
      return rep;
    }
    bool proper = false;
    for (size_t r = 0; r < f.rows(); ++r)
      for (size_t c = 0; c < f.cols(); ++c) {
        if (fbar.at(r, c) < 0)
          add("bad-support", n, static_cast<long>(r), static_cast<long>(c), "negative multiplicity");
        if (fbar.at(r, c) > f.at(r, c))
          add("not-dominated", n, static_cast<long>(r), static_cast<long>(c),
              "more edges retained than present");
        if (f.at(r, c) > 0 && fbar.at(r, c) == 0)
          add("support-violation", n, static_cast<long>(r), static_cast<long>(c),
              "edge bundle dropped entirely");
        proper = proper || fbar.at(r, c) < f.at(r, c);
      }
    if (proper) ++rep.proper_levels;
  }
  rep.proper_seen = rep.proper_levels > 0;
  return rep;
}

std::vector<Int> sub_heights(const Subdiagram& sub, long n) {
  if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
    std::vector<size_t> w1 = vs->support_at(1);
    std::vector<Int> h;
    for (size_t v : w1) h.push_back(vs->parent().root()[v]);
    for (long level = 1; level < n; ++level) h = multiply(vs->block_at(level), h);
    return h;
  }
  return heights(std::get<EdgeSubdiagram>(sub).as_spec(), n);
}

std::vector<Int> sub_heights_embedded(const Subdiagram& sub, long n) {
  std::vector<Int> h = sub_heights(sub, n);
  if (!is_vertex(sub)) return h;
  const auto& vs = std::get<VertexSubdiagram>(sub);
  std::vector<Int> out(vs.parent().vertex_count(n), Int(0));
  std::vector<size_t> w = vs.support_at(n);
  for (size_t i = 0; i < w.size(); ++i) out[w[i]] = h[i];
  return out;
}

DiagramSpec sub_spec_explicit(const Subdiagram& sub, long depth) {
  if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
    std::vector<Int> root;
    for (size_t v : vs->support_at(1)) root.push_back(vs->parent().root()[v]);
    std::vector<IntMatrix> mats;
    for (long n = 1; n < depth; ++n) mats.push_back(vs->block_at(n));
    return DiagramSpec(std::move(root), ExplicitBody{std::move(mats)});
  }
  const auto& es = std::get<EdgeSubdiagram>(sub);
  std::vector<IntMatrix> mats;
  for (long n = 1; n < depth; ++n) mats.push_back(es.matrix_at(n));
  return DiagramSpec(es.root(), ExplicitBody{std::move(mats)});
}

std::optional<TrackPattern> track_pattern(const SupportsBody& supports) {
  if (const auto* sel = std::get_if<SelectorSupports>(&supports)) {
    if (sel->name == "first-vertex") return TrackPattern{1, {0}};
    if (sel->name == "diagonal-track") return TrackPattern{1, {sel->vertex}};
    return std::nullopt;
  }
  if (const auto* st = std::get_if<StationarySupports>(&supports)) {
    if (st->set.size() == 1) return TrackPattern{1, {st->set[0]}};
    return std::nullopt;
  }
  if (const auto* pe = std::get_if<PeriodicSupports>(&supports)) {
    if (!pe->prefix.empty() || pe->cycle.empty()) return std::nullopt;
    const unsigned p = static_cast<unsigned>(pe->cycle.size());
    TrackPattern out{p, std::vector<size_t>(p, 0)};
    for (unsigned r = 0; r < p; ++r) {
      // level n ≡ r (mod p) uses cycle[(n-1) mod p]
      const auto& set = pe->cycle[(r + p - 1) % p];
      if (set.size() != 1) return std::nullopt;
      out.vertex[r] = set[0];
    }
    return out;
  }
  return std::nullopt;
}

std::optional<DiagramSpec> sub_spec_symbolic(const Subdiagram& sub) {
  if (const auto* es = std::get_if<EdgeSubdiagram>(&sub)) return es->as_spec();
  const auto& vs = std::get<VertexSubdiagram>(sub);
  const DiagramSpec& parent = vs.parent();

  auto restricted_root = [&]() {
    std::vector<Int> root;
    for (size_t v : vs.support_at(1)) root.push_back(parent.root()[v]);
    return root;
  };

  if (const auto* fam = std::get_if<FamilyBody>(&parent.body())) {
    const auto* sel = std::get_if<SelectorSupports>(&vs.supports());
    if (fam->name == "embedded-odometer" && sel) {
      const SymbolicSeq& a = fam->params.at("a");
      if (sel->name == "first-vertex")
        return DiagramSpec({parent.root()[0]}, FamilyBody{"odometer", {{"steps", a}}});
      if (sel->name == "all-but-first")
        return DiagramSpec(restricted_root(), FamilyBody{"allones", {{"sizes", a.shift(-1)}}});
    }
    if (fam->name == "allones") {
      // any block of an all-ones matrix is all-ones; only |W_n| matters
      const SymbolicSeq& sizes = fam->params.at("sizes");
      std::optional<SymbolicSeq> wsizes;
      if (sel) {
        if (sel->name == "first-vertex" || sel->name == "diagonal-track")
          wsizes = SymbolicSeq::constant(Rat(1));
        else if (sel->name == "all-but-first")
          wsizes = sizes - SymbolicSeq::constant(Rat(1));
      } else if (const auto* st = std::get_if<StationarySupports>(&vs.supports())) {
        wsizes = SymbolicSeq::constant(Rat(Int(st->set.size())));
      } else if (const auto* pe = std::get_if<PeriodicSupports>(&vs.supports())) {
        if (pe->prefix.empty() && !pe->cycle.empty()) {
          const unsigned p = static_cast<unsigned>(pe->cycle.size());
          std::vector<SeqExpr> cases(p);
          for (unsigned r = 0; r < p; ++r)
            cases[r] =
                SeqExpr::constant(Rat(Int(pe->cycle[(r + p - 1) % p].size())));
          wsizes = SymbolicSeq(p, std::move(cases));
        }
      }
      if (wsizes)
        return DiagramSpec(restricted_root(), FamilyBody{"allones", {{"sizes", *wsizes}}});
    }
  }

  // singleton tracks through a diagram with symbolic 2x2 entries
  SymbolicProfile prof = symbolic_profile(parent);
  if (prof.rank2_entries) {
    if (auto track = track_pattern(vs.supports())) {
      const unsigned L = std::lcm<unsigned>(track->period, [&] {
        unsigned p = 1;
        for (const auto& e : *prof.rank2_entries) p = std::lcm(p, e.period());
        return p;
      }());
      std::vector<SeqExpr> cases(L);
      long valid = 1;
      for (unsigned r = 0; r < L; ++r) {
        const size_t w_n = track->vertex[r % track->period];
        const size_t w_up = track->vertex[(r + 1) % track->period];
        const SymbolicSeq entry =
            (*prof.rank2_entries)[w_up * 2 + w_n].with_period(L);
        cases[r] = entry.cases()[r];
        valid = std::max(valid, entry.valid_from());
      }
      return DiagramSpec(restricted_root(),
                         FamilyBody{"odometer", {{"steps", SymbolicSeq(L, std::move(cases), valid)}}});
    }
  }

  // constant blocks of a stationary parent
  if (std::holds_alternative<StationaryBody>(parent.body())) {
    const bool constant_supports =
        std::holds_alternative<StationarySupports>(vs.supports()) ||
        std::holds_alternative<SelectorSupports>(vs.supports());
    if (constant_supports) {
      try {
        IntMatrix b1 = vs.block_at(1);
        IntMatrix b2 = vs.block_at(2);
        if (b1 == b2) return DiagramSpec(restricted_root(), StationaryBody{b1});
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

VertexSubdiagram complement(const VertexSubdiagram& sub, long depth) {
  const DiagramSpec& parent = sub.parent();
  for (long n = 1; n <= depth; ++n)
    if (sub.complement_at(n).empty())
      throw Error("empty-complement", "support covers level " + std::to_string(n) + " entirely");

  if (const auto* sel = std::get_if<SelectorSupports>(&sub.supports())) {
    if (sel->name == "first-vertex") return {parent, SelectorSupports{"all-but-first", 0}};
    if (sel->name == "all-but-first") return {parent, SelectorSupports{"first-vertex", 0}};
  }
  std::vector<std::vector<size_t>> sets;
  for (long n = 1; n <= depth; ++n) sets.push_back(sub.complement_at(n));
  return {parent, ExplicitSupports{std::move(sets)}};
}

// ---------------------------------------------------------------------------

std::string to_string(MeasureLimitVerdict v) {
  switch (v) {
    case MeasureLimitVerdict::ExactZero: return "exact-zero";
    case MeasureLimitVerdict::ExactPositive: return "exact-positive";
    case MeasureLimitVerdict::LikelyZero: return "likely-zero";
    case MeasureLimitVerdict::LikelyPositive: return "likely-positive";
    case MeasureLimitVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(ThinnessVerdict v) {
  switch (v) {
    case ThinnessVerdict::ExactThin: return "exact-thin";
    case ThinnessVerdict::ExactNotThin: return "exact-not-thin";
    case ThinnessVerdict::LikelyThin: return "likely-thin";
    case ThinnessVerdict::LikelyNotThin: return "likely-not-thin";
    case ThinnessVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

/// Step factor of Σ_{w ∈ sub level} h̄_w · value_w for symbolic verdicts:
/// (|S_{n+1}|/|S_n|) · h̄-step(n) · value-step(n), valid when the sub's
/// heights are level-constant (or the sub is a track) and the measure values
/// are level-constant.
std::optional<SymbolicSeq> symbolic_weighted_mass_step(const Subdiagram& sub,
                                                       const GeometricMeasureProfile& profile) {
  if (!profile.uniform) return std::nullopt;
  auto spec = sub_spec_symbolic(sub);
  if (!spec) return std::nullopt;
  SymbolicProfile prof = symbolic_profile(*spec);
  if (!prof.height_step || !prof.size) return std::nullopt;
  const bool track = prof.size->is_constant_one();
  if (!prof.heights_uniform && !track) return std::nullopt;
  SymbolicSeq size_ratio = prof.size->shift(1) / *prof.size;
  return size_ratio * *prof.height_step * profile.step;
}

struct SimpleHeuristic {
  bool decided = false;
  bool to_zero = false;
  HeuristicOutcome outcome;
};

/// Windowed test on a non-negative non-increasing sequence: does it head to
/// zero or stabilize at a positive value?
SimpleHeuristic limit_heuristic(std::span<const Rat> values, HeuristicParams params = {}) {
  SimpleHeuristic out;
  out.outcome.params = params;
  const long n = static_cast<long>(values.size());
  const long w = std::min<long>(params.window, std::max<long>(1, n / 2));
  if (n < 4) {
    out.outcome.detail = "too few levels";
    return out;
  }
  const Rat first = values[static_cast<size_t>(n - w)];
  const Rat last = values.back();
  if (last == 0) {
    out.decided = true;
    out.to_zero = true;
    out.outcome.classification = Classification::LikelyConvergent;
    out.outcome.detail = "sequence reached zero";
    return out;
  }
  if (first > 0 && last / first < params.geometric_threshold) {
    out.decided = true;
    out.to_zero = true;
    out.outcome.classification = Classification::LikelyConvergent;
    out.outcome.detail = "window decay " + rat_to_string(last / first) + " < " +
                         rat_to_string(params.geometric_threshold);
    return out;
  }
  if (first > 0 && last / first >= params.geometric_threshold) {
    out.decided = true;
    out.to_zero = false;
    out.outcome.classification = Classification::LikelyDivergent;
    out.outcome.detail = "window decay " + rat_to_string(last / first) +
                         " >= " + rat_to_string(params.geometric_threshold);
    return out;
  }
  out.outcome.detail = "window tests inconclusive";
  return out;
}

}  // namespace

SubspaceMeasureReport subspace_measure(const DiagramSpec& spec, const Subdiagram& sub,
                                       const MeasureFamily& mu, long depth) {
  if (mu.depth() < depth)
    throw Error("incompatible-measure", "measure family shallower than requested depth");
  if (!is_compatible(spec, mu))
    throw Error("incompatible-measure", "measure family is not compatible with the diagram");

  SubspaceMeasureReport rep;
  rep.depth = depth;
  for (long n = 1; n <= depth; ++n) {
    std::vector<Int> hbar = sub_heights_embedded(sub, n);
    const auto& p = mu.at_level(n);
    if (p.values.size() != hbar.size())
      throw Error("incompatible-measure", "measure vector size mismatch at level " + std::to_string(n));
    Rat m(0);
    for (size_t w = 0; w < hbar.size(); ++w) m += Rat(hbar[w]) * p.values[w];
    rep.level_measures.push_back(m);
  }

  // Defining series terms: for vertex subdiagrams
  //   term_n = Σ_{v ∈ W'_{n+1}} Σ_{w ∈ W_n} f_{v,w} p_v^{(n+1)} h̄_w^{(n)},
  // for edge subdiagrams the same with removed multiplicities over all
  // vertices. The level identity μ(Y^{(n+1)}) = μ(Y^{(n)}) - term_n holds
  // exactly; tests assert it.
  Rat acc(0);
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    std::vector<Int> hbar = sub_heights_embedded(sub, n);
    const auto& pv = mu.at_level(n + 1).values;
    Rat term(0);
    if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
      for (size_t v : vs->complement_at(n + 1))
        for (size_t w : vs->support_at(n)) term += Rat(f.at(v, w) * hbar[w]) * pv[v];
    } else {
      const auto& es = std::get<EdgeSubdiagram>(sub);
      IntMatrix removed = es.removed_at(n);
      for (size_t v = 0; v < removed.rows(); ++v)
        for (size_t w = 0; w < removed.cols(); ++w)
          if (removed.at(v, w) != 0) term += Rat(removed.at(v, w) * hbar[w]) * pv[v];
    }
    rep.terms.push_back(term);
    acc += term;
    rep.partial_sums.push_back(acc);
  }

  rep.upper = rep.level_measures.back();
  rep.lower = Rat(0);

  if (mu.profile()) {
    if (auto step = symbolic_weighted_mass_step(sub, *mu.profile())) {
      if (auto cls = classify_product(*step)) {
        rep.symbolic = true;
        switch (*cls) {
          case ProductClass::ZeroLimit:
            rep.verdict = MeasureLimitVerdict::ExactZero;
            rep.upper = Rat(0);
            break;
          case ProductClass::PositiveLimit:
            rep.verdict = MeasureLimitVerdict::ExactPositive;
            break;
          case ProductClass::InfiniteLimit:
            rep.symbolic = false;
            rep.note = "symbolic step classified as increasing; inconsistent with a "
                       "monotone level measure, falling back to heuristics";
            break;
        }
      }
    }
  }
  if (!rep.symbolic) {
    SimpleHeuristic h = limit_heuristic(rep.level_measures);
    rep.heuristic = h.outcome;
    if (h.decided)
      rep.verdict = h.to_zero ? MeasureLimitVerdict::LikelyZero : MeasureLimitVerdict::LikelyPositive;
  }
  return rep;
}

ThinnessReport thinness(const DiagramSpec& spec, const Subdiagram& sub, long depth) {
  ThinnessReport rep;
  rep.depth = depth;
  auto hs = heights_up_to(spec, depth);
  for (long n = 1; n <= depth; ++n) {
    std::vector<Int> hbar = sub_heights_embedded(sub, n);
    const auto& h = hs[static_cast<size_t>(n - 1)];
    Rat mx(0), mn(0);
    bool first = true;
    for (size_t w = 0; w < hbar.size(); ++w) {
      if (hbar[w] == 0) continue;  // off the support
      Rat ratio(hbar[w], h[w]);
      ratio.canonicalize();
      if (first) {
        mx = mn = ratio;
        first = false;
      } else {
        mx = std::max(mx, ratio);
        mn = std::min(mn, ratio);
      }
    }
    rep.max_ratios.push_back(mx);
    rep.min_ratios.push_back(mn);
  }

  // simplicity proxy: telescoped incidence product entrywise positive
  {
    IntMatrix prod = spec.matrix_at(1);
    for (long n = 2; n < depth; ++n) prod = multiply(spec.matrix_at(n), prod);
    rep.simplicity_proxy = all_positive(prod);
  }

  // symbolic ratio steps need level-constant heights on both sides (or a
  // singleton track in the subdiagram)
  SymbolicProfile parent_prof = symbolic_profile(spec);
  if (parent_prof.height_step && parent_prof.heights_uniform) {
    if (auto sspec = sub_spec_symbolic(sub)) {
      SymbolicProfile sub_prof = symbolic_profile(*sspec);
      const bool track = sub_prof.size && sub_prof.size->is_constant_one();
      if (sub_prof.height_step && (sub_prof.heights_uniform || track)) {
        SymbolicSeq ratio_step = *sub_prof.height_step / *parent_prof.height_step;
        if (auto cls = classify_product(ratio_step)) {
          rep.symbolic = true;
          switch (*cls) {
            case ProductClass::ZeroLimit:
              rep.verdict = ThinnessVerdict::ExactThin;
              break;
            case ProductClass::PositiveLimit:
              rep.verdict = ThinnessVerdict::ExactNotThin;
              break;
            case ProductClass::InfiniteLimit:
              rep.symbolic = false;
              rep.note = "symbolic ratio step increasing; inconsistent with dominated heights";
              break;
          }
          if (rep.symbolic)
            rep.note = "exact verdict assumes the simplicity/ergodicity hypotheses of the "
                       "vanishing-ratio criterion";
        }
      }
    }
  }

  // stationary pair rule: a proper stationary subdiagram of an irreducible
  // stationary diagram carries no mass of the (unique) invariant measure
  if (!rep.symbolic && rep.verdict == ThinnessVerdict::Inconclusive) {
    if (const auto* st = std::get_if<StationaryBody>(&spec.body())) {
      SubValidationReport v = validate_sub(sub, depth);
      bool stationary_sub = false;
      if (const auto* es = std::get_if<EdgeSubdiagram>(&sub))
        stationary_sub = std::holds_alternative<StationaryBody>(es->as_spec().body());
      else {
        const auto& vs = std::get<VertexSubdiagram>(sub);
        stationary_sub = std::holds_alternative<StationarySupports>(vs.supports()) ||
                         std::holds_alternative<SelectorSupports>(vs.supports());
      }
      if (v.ok && v.proper_seen && stationary_sub && st->matrix.rows() == st->matrix.cols() &&
          irreducible(st->matrix)) {
        rep.verdict = ThinnessVerdict::ExactThin;
        rep.symbolic = true;
        rep.note = "proper stationary subdiagram of an irreducible stationary diagram";
      }
    }
  }

  if (rep.verdict == ThinnessVerdict::Inconclusive) {
    SimpleHeuristic h = limit_heuristic(rep.max_ratios);
    rep.heuristic = h.outcome;
    if (h.decided)
      rep.verdict = h.to_zero ? ThinnessVerdict::LikelyThin : ThinnessVerdict::LikelyNotThin;
  }
  return rep;
}

}  // namespace adic
