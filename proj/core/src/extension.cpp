#include "adic/extension.hpp"

#include <algorithm>
#include <numeric>

namespace adic {

std::string to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::Equivalent: return "equivalent";
    case CriterionKind::Necessary: return "necessary";
    case CriterionKind::Sufficient: return "sufficient";
  }
  return "equivalent";
}

std::string to_string(ExtensionVerdict v) {
  switch (v) {
    case ExtensionVerdict::ExactFinite: return "exact-finite";
    case ExtensionVerdict::ExactInfinite: return "exact-infinite";
    case ExtensionVerdict::LikelyFinite: return "likely-finite";
    case ExtensionVerdict::LikelyInfinite: return "likely-infinite";
    case ExtensionVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

VerdictComposition compose_extension_verdict(std::span<const CriterionRow> rows) {
  VerdictComposition out;
  std::string exact_finite, exact_infinite, likely_finite, likely_infinite;
  for (const auto& r : rows) {
    const bool conv = is_convergent_signal(r.cls);
    const bool div = is_divergent_signal(r.cls);
    const bool exact = is_exact(r.cls);
    switch (r.kind) {
      case CriterionKind::Equivalent:
        if (conv) (exact ? exact_finite : likely_finite) = r.name;
        if (div) (exact ? exact_infinite : likely_infinite) = r.name;
        break;
      case CriterionKind::Sufficient:
        if (conv) (exact ? exact_finite : likely_finite) = r.name;
        break;
      case CriterionKind::Necessary:
        if (div) (exact ? exact_infinite : likely_infinite) = r.name;
        break;
    }
  }
  if (!exact_finite.empty() && !exact_infinite.empty()) {
    out.conflicts.push_back("exact finite via " + exact_finite + " contradicts exact infinite via " +
                            exact_infinite);
    return out;
  }
  if (!exact_finite.empty()) {
    out.verdict = ExtensionVerdict::ExactFinite;
    out.basis = exact_finite;
  } else if (!exact_infinite.empty()) {
    out.verdict = ExtensionVerdict::ExactInfinite;
    out.basis = exact_infinite;
  } else if (!likely_finite.empty() && !likely_infinite.empty()) {
    out.conflicts.push_back("heuristic signals disagree: " + likely_finite + " vs " +
                            likely_infinite);
  } else if (!likely_finite.empty()) {
    out.verdict = ExtensionVerdict::LikelyFinite;
    out.basis = likely_finite;
  } else if (!likely_infinite.empty()) {
    out.verdict = ExtensionVerdict::LikelyInfinite;
    out.basis = likely_infinite;
  }
  return out;
}

namespace {

void finish_row(CriterionRow& row, const std::optional<SymbolicSeq>& symbolic) {
  Rat acc(0);
  row.partial_sums.clear();
  for (const auto& t : row.terms) {
    acc += t;
    row.partial_sums.push_back(acc);
  }
  SeriesAnalysis an = analyze_series(symbolic, row.terms);
  row.cls = an.classification;
  row.symbolic = an.symbolic;
  row.heuristic = an.heuristic;
  if (!an.note.empty()) row.note = an.note;
}

/// Σ t_n with t_{n+1} = t_n · step(n) · factor(n+1)/factor(n); positive
/// terms, geometric-profile scale times an in-class factor.
std::optional<bool> classify_scaled_series(const SymbolicSeq& step, const SymbolicSeq& factor) {
  if (factor.is_zero()) return true;
  try {
    SymbolicSeq ratio = step * (factor.shift(1) / factor);
    return classify_series_by_ratio_convergent(ratio);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void classify_row_scaled(CriterionRow& row, const std::optional<SymbolicSeq>& step,
                         const std::optional<SymbolicSeq>& factor) {
  Rat acc(0);
  row.partial_sums.clear();
  for (const auto& t : row.terms) {
    acc += t;
    row.partial_sums.push_back(acc);
  }
  if (step && factor) {
    if (auto conv = classify_scaled_series(*step, *factor)) {
      row.cls = *conv ? Classification::ExactConvergent : Classification::ExactDivergent;
      row.symbolic = true;
      return;
    }
  }
  HeuristicOutcome h = heuristic_series(row.terms);
  row.cls = h.classification;
  row.heuristic = h;
}

void check_pbar(const Subdiagram& sub, const MeasureFamily& pbar, long depth) {
  if (pbar.depth() < depth)
    throw Error("incompatible-sub-measure", "subdiagram measure shallower than requested depth");
  DiagramSpec sspec = sub_spec_explicit(sub, depth);
  for (long n = 1; n < depth; ++n) {
    MeasureVector down = propagate_down(sspec, pbar.at_level(n + 1));
    if (down.values != pbar.at_level(n).values)
      throw Error("incompatible-sub-measure",
                  "measure is not compatible with the subdiagram at level " + std::to_string(n));
  }
}

/// Detects the embedded-odometer/first-vertex pair with the canonical
/// odometer measure, where the increment series is sandwiched between
/// multiples of Σ 1/a_n; emits that bound as an equivalent criterion.
std::optional<CriterionRow> embedded_odometer_bound(const DiagramSpec& spec, const Subdiagram& sub,
                                                    const MeasureFamily& pbar, long depth) {
  const auto* vs = std::get_if<VertexSubdiagram>(&sub);
  if (!vs) return std::nullopt;
  const auto* fam = std::get_if<FamilyBody>(&spec.body());
  if (!fam || fam->name != "embedded-odometer") return std::nullopt;
  const auto* sel = std::get_if<SelectorSupports>(&vs->supports());
  if (!sel || sel->name != "first-vertex") return std::nullopt;
  auto sspec = sub_spec_symbolic(sub);
  if (!sspec) return std::nullopt;
  MeasureFamily canonical = uniform_ecs_measure(*sspec, depth);
  for (long n = 1; n <= depth; ++n)
    if (canonical.at_level(n).values != pbar.at_level(n).values) return std::nullopt;

  const SymbolicSeq& a = fam->params.at("a");
  CriterionRow row;
  row.name = "embedded-odometer-bound";
  row.kind = CriterionKind::Equivalent;
  row.note = "increments are sandwiched between positive multiples of 1/a_n; the series"
             " shares its convergence with Σ 1/a_n";
  for (long n = 1; n < depth; ++n) row.terms.push_back(Rat(1) / a.eval(n));
  finish_row(row, SymbolicSeq::constant(Rat(1)) / a);
  return row;
}

std::optional<CriterionRow> thin_subdiagram_row(const DiagramSpec& spec, const Subdiagram& sub,
                                                long depth) {
  ThinnessReport thin = thinness(spec, sub, depth);
  if (thin.verdict != ThinnessVerdict::ExactThin) return std::nullopt;
  CriterionRow row;
  row.name = "thin-subdiagram";
  row.kind = CriterionKind::Necessary;
  row.terms = thin.max_ratios;
  Rat acc(0);
  for (const auto& t : row.terms) {
    acc += t;
    row.partial_sums.push_back(acc);
  }
  row.cls = Classification::ExactDivergent;  // thin path space forces an infinite extension
  row.symbolic = true;
  row.note = "vanishing height ratios: every measure on the subdiagram extends with infinite mass";
  return row;
}

}  // namespace

ExtensionReport extension_partial(const DiagramSpec& spec, const Subdiagram& sub,
                                  const MeasureFamily& pbar, long depth) {
  check_pbar(sub, pbar, depth);
  ExtensionReport rep;
  rep.depth = depth;

  auto hs = heights_up_to(spec, depth);
  for (long n = 1; n <= depth; ++n) {
    const auto& h = hs[static_cast<size_t>(n - 1)];
    std::vector<size_t> verts = sub_vertices_at(sub, n);
    const auto& pv = pbar.at_level(n).values;
    if (pv.size() != verts.size())
      throw Error("incompatible-sub-measure", "measure vector does not match the subdiagram level");
    Rat m(0);
    for (size_t i = 0; i < verts.size(); ++i) m += Rat(h[verts[i]]) * pv[i];
    rep.mass.push_back(m);
  }

  // increments via the finiteness-theorem series, exactly
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    const auto& h = hs[static_cast<size_t>(n - 1)];
    const auto& pv = pbar.at_level(n + 1).values;
    Rat term(0);
    if (const auto* vs = std::get_if<VertexSubdiagram>(&sub)) {
      std::vector<size_t> up = vs->support_at(n + 1);
      std::vector<size_t> out = vs->complement_at(n);
      for (size_t i = 0; i < up.size(); ++i)
        for (size_t w : out) term += Rat(f.at(up[i], w) * h[w]) * pv[i];
    } else {
      IntMatrix removed = std::get<EdgeSubdiagram>(sub).removed_at(n);
      for (size_t v = 0; v < removed.rows(); ++v)
        for (size_t w = 0; w < removed.cols(); ++w)
          if (removed.at(v, w) != 0) term += Rat(removed.at(v, w) * h[w]) * pv[v];
    }
    rep.increments.push_back(term);
  }

  // trajectory row: classified through the mass-step product when the
  // symbolic profile supports it
  CriterionRow trajectory;
  trajectory.name = "mass-trajectory";
  trajectory.kind = CriterionKind::Equivalent;
  trajectory.terms = rep.increments;
  {
    Rat acc(0);
    for (const auto& t : trajectory.terms) {
      acc += t;
      trajectory.partial_sums.push_back(acc);
    }
    SymbolicProfile parent_prof = symbolic_profile(spec);
    std::optional<ProductClass> mass_cls;
    if (parent_prof.heights_uniform && parent_prof.height_step && pbar.profile() &&
        pbar.profile()->uniform) {
      if (auto sspec = sub_spec_symbolic(sub)) {
        SymbolicProfile sub_prof = symbolic_profile(*sspec);
        if (sub_prof.size) {
          SymbolicSeq step =
              (sub_prof.size->shift(1) / *sub_prof.size) * *parent_prof.height_step *
              pbar.profile()->step;
          mass_cls = classify_product(step);
        }
      }
    }
    if (mass_cls && *mass_cls != ProductClass::ZeroLimit) {
      trajectory.symbolic = true;
      trajectory.cls = *mass_cls == ProductClass::PositiveLimit ? Classification::ExactConvergent
                                                                : Classification::ExactDivergent;
    } else {
      HeuristicOutcome h = heuristic_series(trajectory.terms);
      trajectory.cls = h.classification;
      trajectory.heuristic = h;
    }
  }
  rep.criteria.push_back(std::move(trajectory));

  if (auto bound = embedded_odometer_bound(spec, sub, pbar, depth))
    rep.criteria.push_back(std::move(*bound));
  if (auto thin = thin_subdiagram_row(spec, sub, depth)) rep.criteria.push_back(std::move(*thin));

  VerdictComposition comp = compose_extension_verdict(rep.criteria);
  rep.verdict = comp.verdict;
  rep.conflicts = std::move(comp.conflicts);
  rep.basis = comp.basis;
  return rep;
}

std::vector<CriterionRow> vertex_criteria(const DiagramSpec& spec, const VertexSubdiagram& sub,
                                          const MeasureFamily& pbar, long depth) {
  Subdiagram s{sub};
  check_pbar(s, pbar, depth);
  auto hs = heights_up_to(spec, depth);

  CriterionRow equivalent{.name = "vertex-equivalent", .kind = CriterionKind::Equivalent};
  CriterionRow nec_a{.name = "vertex-necessary-a", .kind = CriterionKind::Necessary};
  CriterionRow nec_b{.name = "vertex-necessary-b", .kind = CriterionKind::Necessary};
  CriterionRow suf_sum{.name = "vertex-sufficient-sum", .kind = CriterionKind::Sufficient};
  CriterionRow suf_max{.name = "vertex-sufficient-max", .kind = CriterionKind::Sufficient};

  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    const auto& h = hs[static_cast<size_t>(n - 1)];
    const auto& hup = hs[static_cast<size_t>(n)];
    std::vector<size_t> up = sub.support_at(n + 1);
    std::vector<size_t> out = sub.complement_at(n);
    const auto& pv = pbar.at_level(n + 1).values;
    std::vector<Int> hbar_up = sub_heights(s, n + 1);

    Rat eq(0), a(0), sum(0), mx(0);
    std::optional<Rat> mn;
    for (size_t i = 0; i < up.size(); ++i) {
      const size_t v = up[i];
      Rat row_q(0), row_qmax(0);
      for (size_t w : out) {
        Rat q(f.at(v, w) * h[w], hup[v]);
        q.canonicalize();
        row_q += q;
        row_qmax = std::max(row_qmax, q);
        eq += Rat(f.at(v, w) * h[w]) * pv[i];
      }
      a += row_q * Rat(hbar_up[i]) * pv[i];
      sum += row_q;
      mx = std::max(mx, row_q);
      mn = mn ? std::min(*mn, row_qmax) : row_qmax;
    }
    equivalent.terms.push_back(eq);
    nec_a.terms.push_back(a);
    nec_b.terms.push_back(mn.value_or(Rat(0)));
    suf_sum.terms.push_back(sum);
    suf_max.terms.push_back(mx);
  }

  // symbolic term forms for the track and all-ones regimes
  std::optional<SymbolicSeq> sym_eq_step, sym_eq_factor, sym_a, sym_b, sym_sum, sym_max;
  SymbolicProfile prof = symbolic_profile(spec);
  const Rat pbar_mass = [&] {  // Σ h̄ p̄ at level 1, constant across levels
    std::vector<Int> h1 = sub_heights(s, 1);
    Rat m(0);
    for (size_t i = 0; i < h1.size(); ++i) m += Rat(h1[i]) * pbar.at_level(1).values[i];
    return m;
  }();
  if (prof.heights_uniform && prof.height_step && prof.rank2_entries && prof.row_sum) {
    if (auto track = track_pattern(sub.supports())) {
      // q-series collapse to the single entry f_{w_{n+1}, v'_n}/r_n
      const unsigned tp = track->period;
      unsigned L = tp;
      for (const auto& e : *prof.rank2_entries) L = std::lcm(L, e.period());
      std::vector<SeqExpr> cases(L);
      long valid = 1;
      for (unsigned r = 0; r < L; ++r) {
        const size_t w_n = track->vertex[r % tp];
        const size_t w_up = track->vertex[(r + 1) % tp];
        const SymbolicSeq entry = (*prof.rank2_entries)[w_up * 2 + (1 - w_n)].with_period(L);
        cases[r] = entry.cases()[r];
        valid = std::max(valid, entry.valid_from());
      }
      SymbolicSeq off(L, std::move(cases), valid);
      SymbolicSeq q = off / *prof.row_sum;
      sym_b = q;
      sym_sum = q;
      sym_max = q;
      sym_a = q * SymbolicSeq::constant(pbar_mass);
      if (pbar.profile() && pbar.profile()->uniform) {
        // term_n = H_n · p̄^{(n+1)} · f-entry: the measure step enters one
        // level ahead
        sym_eq_step = *prof.height_step * pbar.profile()->step.shift(1);
        sym_eq_factor = off;
      }
    }
  }
  if (!sym_sum && prof.heights_uniform) {
    if (const auto* fam = std::get_if<FamilyBody>(&spec.body()); fam && fam->name == "allones") {
      if (auto sspec = sub_spec_symbolic(s)) {
        SymbolicProfile sprof = symbolic_profile(*sspec);
        if (sprof.size && prof.size) {
          SymbolicSeq wsz = *sprof.size, vsz = *prof.size;
          SymbolicSeq rest = vsz - wsz;  // |W'_n|
          bool proper = true;
          for (const auto& c : rest.cases()) proper = proper && c.eventual_sign() > 0;
          if (proper) {
            sym_b = SymbolicSeq::constant(Rat(1)) / vsz;
            sym_sum = wsz.shift(1) * rest / vsz;
            sym_max = rest / vsz;
            sym_a = SymbolicSeq::constant(pbar_mass) * rest / vsz;
            if (pbar.profile() && pbar.profile()->uniform) {
              sym_eq_step = *prof.height_step * pbar.profile()->step.shift(1);
              sym_eq_factor = wsz.shift(1) * rest;
            }
          }
        }
      }
    }
  }

  classify_row_scaled(equivalent, sym_eq_step, sym_eq_factor);
  finish_row(nec_a, sym_a);
  finish_row(nec_b, sym_b);
  finish_row(suf_sum, sym_sum);
  finish_row(suf_max, sym_max);

  std::vector<CriterionRow> rows;
  rows.push_back(std::move(equivalent));
  rows.push_back(std::move(nec_a));
  rows.push_back(std::move(nec_b));
  rows.push_back(std::move(suf_sum));
  rows.push_back(std::move(suf_max));
  if (auto bound = embedded_odometer_bound(spec, s, pbar, depth)) rows.push_back(std::move(*bound));
  if (auto thin = thin_subdiagram_row(spec, s, depth)) rows.push_back(std::move(*thin));
  return rows;
}

std::vector<CriterionRow> edge_criteria(const DiagramSpec& spec, const EdgeSubdiagram& sub,
                                        const MeasureFamily& pbar, long depth) {
  Subdiagram s{sub};
  check_pbar(s, pbar, depth);
  auto hs = heights_up_to(spec, depth);

  CriterionRow equivalent{.name = "edge-equivalent", .kind = CriterionKind::Equivalent};
  CriterionRow suf_max{.name = "edge-sufficient-max", .kind = CriterionKind::Sufficient};

  for (long n = 1; n < depth; ++n) {
    IntMatrix removed = sub.removed_at(n);
    const auto& h = hs[static_cast<size_t>(n - 1)];
    const auto& pv = pbar.at_level(n + 1).values;
    std::vector<Int> hbar_up = sub_heights(s, n + 1);
    Rat eq(0), mx(0);
    for (size_t v = 0; v < removed.rows(); ++v) {
      Rat row(0);
      for (size_t w = 0; w < removed.cols(); ++w) {
        if (removed.at(v, w) == 0) continue;
        eq += Rat(removed.at(v, w) * h[w]) * pv[v];
        Rat contrib(removed.at(v, w) * h[w], hbar_up[v]);
        contrib.canonicalize();
        row += contrib;
      }
      mx = std::max(mx, row);
    }
    equivalent.terms.push_back(eq);
    suf_max.terms.push_back(mx);
  }

  // symbolic: uniform parent heights, canonical sub measure
  std::optional<SymbolicSeq> eq_step, eq_factor, max_step, max_factor;
  SymbolicProfile prof = symbolic_profile(spec);
  SymbolicProfile sprof = symbolic_profile(sub.as_spec());
  if (prof.heights_uniform && prof.height_step && prof.entry_sum && sprof.entry_sum &&
      pbar.profile() && pbar.profile()->uniform) {
    eq_step = *prof.height_step * pbar.profile()->step.shift(1);
    eq_factor = *prof.entry_sum - *sprof.entry_sum;
  }
  if (prof.heights_uniform && prof.height_step && prof.row_sum && sprof.row_sum &&
      sprof.height_step) {
    // f̃ rows all sum to r_n - r̄_n when both sides have equal row sums
    max_step = *prof.height_step / sprof.height_step->shift(1);
    max_factor = *prof.row_sum - *sprof.row_sum;
  }
  classify_row_scaled(equivalent, eq_step, eq_factor);
  classify_row_scaled(suf_max, max_step, max_factor);

  std::vector<CriterionRow> rows;
  rows.push_back(std::move(equivalent));
  rows.push_back(std::move(suf_max));
  if (auto thin = thin_subdiagram_row(spec, s, depth)) rows.push_back(std::move(*thin));
  return rows;
}

ErsEcsReport ers_ecs_criterion(const DiagramSpec& spec, const EdgeSubdiagram& sub, long depth) {
  SumCheckReport ers = ers_check(spec, depth);
  if (!ers.ok)
    throw Error("not-ers", "parent row sums differ at level " + std::to_string(ers.violation_level));
  MeasureFamily pbar = uniform_ecs_measure(sub.as_spec(), depth);  // throws not-ecs
  ErsEcsReport rep;
  rep.criteria = edge_criteria(spec, sub, pbar, depth);
  VerdictComposition comp = compose_extension_verdict(rep.criteria);
  rep.verdict = comp.verdict;
  rep.basis = comp.basis;
  return rep;
}

OdometerCheckReport rank2_odometer_check(const DiagramSpec& spec, const SupportsBody& track,
                                         long depth) {
  for (long n = 1; n <= 2; ++n) {
    IntMatrix f = spec.matrix_at(n);
    if (f.rows() != 2 || f.cols() != 2) throw Error("not-rank2", "needs a 2x2 diagram");
  }
  SumCheckReport ers = ers_check(spec, depth);
  if (!ers.ok) throw Error("not-ers", "row sums differ at level " + std::to_string(ers.violation_level));

  VertexSubdiagram sub(spec, track);
  OdometerCheckReport rep;
  rep.row.name = "rank2-odometer";
  rep.row.kind = CriterionKind::Equivalent;
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    std::vector<size_t> up = sub.support_at(n + 1);
    std::vector<size_t> out = sub.complement_at(n);
    if (up.size() != 1 || out.size() != 1)
      throw Error("not-rank2", "odometer track must select a single vertex per level");
    Rat term(f.at(up[0], out[0]), *f.equal_row_sum());
    term.canonicalize();
    rep.row.terms.push_back(term);
  }

  std::optional<SymbolicSeq> symbolic;
  SymbolicProfile prof = symbolic_profile(spec);
  if (prof.rank2_entries && prof.row_sum) {
    if (auto tp = track_pattern(track)) {
      unsigned L = tp->period;
      for (const auto& e : *prof.rank2_entries) L = std::lcm(L, e.period());
      std::vector<SeqExpr> cases(L);
      long valid = 1;
      for (unsigned r = 0; r < L; ++r) {
        const size_t w_n = tp->vertex[r % tp->period];
        const size_t w_up = tp->vertex[(r + 1) % tp->period];
        const SymbolicSeq entry = (*prof.rank2_entries)[w_up * 2 + (1 - w_n)].with_period(L);
        cases[r] = entry.cases()[r];
        valid = std::max(valid, entry.valid_from());
      }
      symbolic = SymbolicSeq(L, std::move(cases), valid) / *prof.row_sum;
    }
  }
  finish_row(rep.row, symbolic);

  switch (rep.row.cls) {
    case Classification::ExactConvergent: rep.verdict = ExtensionVerdict::ExactFinite; break;
    case Classification::ExactDivergent: rep.verdict = ExtensionVerdict::ExactInfinite; break;
    case Classification::LikelyConvergent: rep.verdict = ExtensionVerdict::LikelyFinite; break;
    case Classification::LikelyDivergent: rep.verdict = ExtensionVerdict::LikelyInfinite; break;
    case Classification::Inconclusive: rep.verdict = ExtensionVerdict::Inconclusive; break;
  }
  if (rep.verdict == ExtensionVerdict::ExactFinite) {
    auto sspec = sub_spec_symbolic(Subdiagram{sub});
    MeasureFamily pbar = uniform_ecs_measure(sspec ? *sspec : sub_spec_explicit(Subdiagram{sub}, depth), depth);
    rep.cross_validation = vertex_criteria(spec, sub, pbar, depth);
  }
  return rep;
}

WitnessReport thin_implies_infinite_check(const DiagramSpec& spec, const Subdiagram& sub,
                                          const MeasureFamily& pbar, long depth, const Rat& bound) {
  ExtensionReport ext = extension_partial(spec, sub, pbar, depth);
  WitnessReport rep;
  rep.mass = ext.mass;
  auto hs = heights_up_to(spec, depth);
  for (long n = 1; n <= depth; ++n) {
    const auto& h = hs[static_cast<size_t>(n - 1)];
    std::vector<size_t> verts = sub_vertices_at(sub, n);
    std::vector<Int> hbar = sub_heights(sub, n);
    const auto& pv = pbar.at_level(n).values;
    Rat sub_mass(0);
    std::optional<Rat> min_ratio;
    for (size_t i = 0; i < verts.size(); ++i) {
      sub_mass += Rat(hbar[i]) * pv[i];
      Rat ratio(h[verts[i]], hbar[i]);
      ratio.canonicalize();
      min_ratio = min_ratio ? std::min(*min_ratio, ratio) : ratio;
    }
    rep.lower_bounds.push_back(min_ratio.value_or(Rat(0)) * sub_mass);
    if (!rep.witness_level && rep.mass[static_cast<size_t>(n - 1)] > bound) rep.witness_level = n;
  }
  return rep;
}

}  // namespace adic
