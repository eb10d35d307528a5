#include "adic/measure.hpp"

#include <algorithm>
#include <cmath>

namespace adic {

MeasureFamily::MeasureFamily(std::vector<MeasureVector> levels,
                             std::optional<GeometricMeasureProfile> profile)
    : levels_(std::move(levels)), profile_(std::move(profile)) {
  for (size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i].level != static_cast<long>(i) + 1)
      throw Error("bad-measure", "measure family levels must run 1..depth");
}

const MeasureVector& MeasureFamily::at_level(long n) const {
  if (n < 1 || n > depth()) throw Error("level-out-of-range", "no measure vector at requested level");
  return levels_[static_cast<size_t>(n - 1)];
}

MeasureVector propagate_down(const DiagramSpec& spec, const MeasureVector& upper) {
  if (upper.level < 2) throw Error("level-out-of-range", "propagation needs level >= 2");
  IntMatrix f = spec.matrix_at(upper.level - 1);
  if (f.rows() != upper.values.size())
    throw Error("dimension-mismatch", "measure vector does not match level size");
  return {upper.level - 1, multiply_transpose(f, upper.values)};
}

Rat level_mass(const DiagramSpec& spec, const MeasureVector& p) {
  auto h = heights(spec, p.level);
  if (h.size() != p.values.size())
    throw Error("dimension-mismatch", "measure vector does not match level size");
  Rat mass(0);
  for (size_t v = 0; v < h.size(); ++v) mass += Rat(h[v]) * p.values[v];
  return mass;
}

MeasureFamily family_from_top(const DiagramSpec& spec, MeasureVector top) {
  std::vector<MeasureVector> levels(static_cast<size_t>(top.level));
  levels[static_cast<size_t>(top.level - 1)] = std::move(top);
  for (long n = levels.size(); n >= 2; --n)
    levels[static_cast<size_t>(n - 2)] =
        propagate_down(spec, levels[static_cast<size_t>(n - 1)]);
  return MeasureFamily(std::move(levels));
}

bool is_compatible(const DiagramSpec& spec, const MeasureFamily& family) {
  for (long n = 1; n < family.depth(); ++n) {
    MeasureVector down = propagate_down(spec, family.at_level(n + 1));
    if (down.values != family.at_level(n).values) return false;
  }
  return true;
}

MeasureFamily uniform_ecs_measure(const DiagramSpec& spec, long depth) {
  SumCheckReport ecs = ecs_check(spec, depth);
  if (!ecs.ok)
    throw Error("not-ecs", "column sums differ at level " + std::to_string(ecs.violation_level));
  std::vector<MeasureVector> levels;
  Rat value = Rat(1) / Rat(ecs.sums[0]);  // 1/c_0
  for (long n = 1; n <= depth; ++n) {
    levels.push_back({n, std::vector<Rat>(spec.vertex_count(n), value)});
    if (n < depth) value /= Rat(ecs.sums[static_cast<size_t>(n)]);
  }
  std::optional<GeometricMeasureProfile> profile;
  if (auto cs = symbolic_profile(spec).col_sum)
    profile = GeometricMeasureProfile{std::vector<Rat>(spec.vertex_count(1), Rat(1) / Rat(ecs.sums[0])),
                                      SymbolicSeq::constant(Rat(1)) / *cs, true};
  return MeasureFamily(std::move(levels), std::move(profile));
}

// ---------------------------------------------------------------------------
// Simplex machinery

Rat simplex_diameter(std::span<const MeasureVector> points) {
  Rat best(0);
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j) {
      Rat d(0);
      for (size_t w = 0; w < points[i].values.size(); ++w)
        d += abs(points[i].values[w] - points[j].values[w]);
      best = std::max(best, d);
    }
  return best;
}

SimplexState simplex_contract(const DiagramSpec& spec, long to_depth, long base_level) {
  if (base_level < 1 || to_depth < base_level)
    throw Error("level-out-of-range", "need 1 <= base_level <= to_depth");
  auto hs = heights_up_to(spec, to_depth);
  SimplexState out;
  out.base_level = base_level;
  out.depth = to_depth;

  // chain[w][i] counts paths from level-base vertex w to level-(base+j)
  // vertex i; extreme point i at step j is column i scaled by 1/h_i.
  const size_t base_size = spec.vertex_count(base_level);
  IntMatrix chain(base_size, base_size);
  for (size_t w = 0; w < base_size; ++w) chain.at(w, w) = 1;

  auto points_at = [&](const IntMatrix& m, long level) {
    std::vector<MeasureVector> pts;
    const auto& h = hs[static_cast<size_t>(level - 1)];
    for (size_t i = 0; i < m.cols(); ++i) {
      MeasureVector p{base_level, std::vector<Rat>(m.rows(), Rat(0))};
      for (size_t w = 0; w < m.rows(); ++w) {
        p.values[w] = Rat(m.at(w, i), h[i]);
        p.values[w].canonicalize();
      }
      pts.push_back(std::move(p));
    }
    return pts;
  };

  std::vector<MeasureVector> pts = points_at(chain, base_level);
  out.step_diameters.push_back(simplex_diameter(pts));
  for (long level = base_level; level < to_depth; ++level) {
    chain = multiply(chain, /* transpose read of F: */ [&] {
      IntMatrix f = spec.matrix_at(level);
      IntMatrix ft(f.cols(), f.rows());
      for (size_t r = 0; r < f.rows(); ++r)
        for (size_t c = 0; c < f.cols(); ++c) ft.at(c, r) = f.at(r, c);
      return ft;
    }());
    pts = points_at(chain, level + 1);
    out.step_diameters.push_back(simplex_diameter(pts));
  }
  out.extreme_points = std::move(pts);
  out.sources.resize(out.extreme_points.size());
  for (size_t i = 0; i < out.sources.size(); ++i) out.sources[i] = i;
  return out;
}

// ---------------------------------------------------------------------------
// Determinants and ergodic counting

Rat z_determinant(const DiagramSpec& spec, long n) {
  IntMatrix f = spec.matrix_at(n);
  if (f.rows() != f.cols())
    throw Error("not-ers", "volume determinant needs a square incidence matrix");
  auto rs = f.equal_row_sum();
  if (!rs) throw Error("not-ers", "row sums differ at level " + std::to_string(n));
  const size_t k = f.rows();
  RatMatrix m(k, k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j + 1 < k; ++j) {
      m.at(i, j) = Rat(f.at(i, j), *rs);
      m.at(i, j).canonicalize();
    }
    m.at(i, k - 1) = Rat(1);
  }
  return determinant(std::move(m));
}

namespace {

// |z(n)| branchwise, usable once each branch has settled on its eventual
// sign; adequate for tail classification.
std::optional<SymbolicSeq> eventually_abs(const SymbolicSeq& s) {
  std::vector<SeqExpr> cases;
  for (const auto& e : s.cases()) {
    const int sig = e.eventual_sign();
    cases.push_back(sig < 0 ? -e : e);
  }
  return SymbolicSeq(s.period(), std::move(cases), s.valid_from());
}

std::optional<SymbolicSeq> symbolic_z(const DiagramSpec& spec) {
  SymbolicProfile prof = symbolic_profile(spec);
  if (!prof.rank2_entries || !prof.row_sum) return std::nullopt;
  const auto& e = *prof.rank2_entries;  // a, c, d, b
  return (e[0] - e[2]) / *prof.row_sum;
}

}  // namespace

ErgodicCountReport count_ergodic(const DiagramSpec& spec, long depth, CountMode mode) {
  if (depth < 2) throw Error("level-out-of-range", "counting needs depth >= 2");
  ValidationReport vr = validate(spec, depth);
  if (!vr.ok) throw Error("invalid-spec", "count_ergodic: " + vr.violations.front().message);

  ErgodicCountReport rep;
  rep.depth = depth;

  bool sizes_constant = true;
  const size_t k = spec.vertex_count(1);
  for (long n = 2; n <= depth && sizes_constant; ++n)
    sizes_constant = spec.vertex_count(n) == k;
  rep.rank = k;

  const bool ers_ok = sizes_constant && ers_check(spec, depth).ok;
  if (mode == CountMode::Auto) mode = ers_ok ? CountMode::Determinant : CountMode::Diameter;
  rep.mode = mode;

  if (mode == CountMode::Determinant && !ers_ok)
    throw Error("not-ers", "determinant mode needs a constant-size equal-row-sum diagram");

  std::vector<Rat> ratios;  // one-step contraction factors per level
  if (mode == CountMode::Determinant) {
    for (long n = 1; n < depth; ++n) {
      rep.z_values.push_back(z_determinant(spec, n));
      ratios.push_back(abs(rep.z_values.back()));
    }
  } else {
    // d(G_n G_{n+1} Δ^{(n+2)}) / d(G_{n+1} Δ^{(n+2)}) in L1, exact
    for (long n = 1; n + 2 <= depth; ++n) {
      SimplexState upper = simplex_contract(spec, n + 2, n + 1);
      SimplexState lower = simplex_contract(spec, n + 2, n);
      const Rat du = upper.step_diameters.back();
      const Rat dl = lower.step_diameters.back();
      ratios.push_back(du == 0 ? Rat(0) : Rat(dl / du));
    }
  }

  for (size_t i = 0; i < ratios.size(); ++i)
    if (ratios[i] == 0) rep.singular_levels.push_back(static_cast<long>(i) + 1);

  Rat prod(1);
  const long tail_start =
      rep.singular_levels.empty() ? 1 : rep.singular_levels.back() + 1;
  for (size_t i = static_cast<size_t>(tail_start - 1); i < ratios.size(); ++i) prod *= ratios[i];
  rep.partial_product = prod;
  {
    SimplexState full = simplex_contract(spec, depth, tail_start);
    rep.diameter = full.step_diameters.back();
  }
  if (!rep.singular_levels.empty())
    rep.note = "singular prefix excluded from the tail product; levels listed";

  // gap terms 1 - ratio for the classifier / heuristics
  std::vector<Rat> gap;
  for (size_t i = static_cast<size_t>(tail_start - 1); i < ratios.size(); ++i)
    gap.push_back(Rat(1) - ratios[i]);

  std::optional<SymbolicSeq> sym_gap;
  if (k == 2 && sizes_constant) {
    if (auto z = symbolic_z(spec)) {
      if (auto az = eventually_abs(*z)) sym_gap = SymbolicSeq::constant(Rat(1)) - *az;
    }
  }

  SeriesAnalysis an = analyze_series(sym_gap, gap);
  rep.symbolic = an.symbolic;
  rep.heuristic = an.heuristic;
  switch (an.classification) {
    case Classification::ExactConvergent:
      rep.kind = ErgodicCountReport::Kind::Exact;
      rep.count = static_cast<int>(k);
      break;
    case Classification::ExactDivergent:
      if (k == 2) {
        rep.kind = ErgodicCountReport::Kind::Exact;
        rep.count = 1;
      } else {
        rep.kind = ErgodicCountReport::Kind::LowerBound;
        rep.count = 1;
        rep.note += (rep.note.empty() ? "" : "; ");
        rep.note += "tail contraction rules out the maximal count";
      }
      break;
    case Classification::LikelyConvergent:
      rep.kind = ErgodicCountReport::Kind::Heuristic;
      rep.count = static_cast<int>(k);
      break;
    case Classification::LikelyDivergent:
      rep.kind = ErgodicCountReport::Kind::Heuristic;
      rep.count = 1;
      break;
    case Classification::Inconclusive:
      rep.kind = ErgodicCountReport::Kind::Heuristic;
      rep.count = 1;
      rep.note += (rep.note.empty() ? "" : "; ");
      rep.note += "series tests inconclusive";
      break;
  }
  if (k == 1) {  // a single vertex per level always carries exactly one measure
    rep.kind = ErgodicCountReport::Kind::Exact;
    rep.count = 1;
    rep.symbolic = true;
  }
  return rep;
}

Rank2Report rank2_ers_classify(const DiagramSpec& spec, long depth) {
  if (depth < 2) throw Error("level-out-of-range", "classification needs depth >= 2");
  for (long n = 1; n <= 2; ++n) {
    IntMatrix f = spec.matrix_at(n);
    if (f.rows() != 2 || f.cols() != 2) throw Error("not-rank2", "needs a 2x2 diagram");
  }
  SumCheckReport ers = ers_check(spec, depth);
  if (!ers.ok) throw Error("not-ers", "row sums differ at level " + std::to_string(ers.violation_level));

  Rank2Report rep;
  rep.depth = depth;
  for (long n = 1; n < depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    const Int r = *f.equal_row_sum();
    const Int a = f.at(0, 0), d = f.at(1, 0);
    Rat maxad = Rat(std::max(a, d)), minad = Rat(std::min(a, d));
    rep.major_terms.push_back(Rat(1) - maxad / Rat(r));
    rep.minor_terms.push_back(minad / Rat(r));
    rep.gap_terms.push_back(rep.major_terms.back() + rep.minor_terms.back());
  }

  std::optional<SymbolicSeq> sym_major, sym_minor, sym_gap;
  SymbolicProfile prof = symbolic_profile(spec);
  if (prof.rank2_entries && prof.row_sum) {
    const auto& e = *prof.rank2_entries;  // a, c, d, b
    SymbolicSeq diff = e[0] - e[2];       // a - d
    if (auto ad = eventually_abs(diff)) {
      // max = (a + d + |a-d|)/2, min = (a + d - |a-d|)/2  (eventual forms)
      SymbolicSeq sum = e[0] + e[2];
      SymbolicSeq two = SymbolicSeq::constant(Rat(2));
      sym_major = SymbolicSeq::constant(Rat(1)) - ((sum + *ad) / two) / *prof.row_sum;
      sym_minor = ((sum - *ad) / two) / *prof.row_sum;
      sym_gap = SymbolicSeq::constant(Rat(1)) - *ad / *prof.row_sum;
    }
  }

  SeriesAnalysis major = analyze_series(sym_major, rep.major_terms);
  SeriesAnalysis minor = analyze_series(sym_minor, rep.minor_terms);
  SeriesAnalysis gap = analyze_series(sym_gap, rep.gap_terms);
  rep.major_cls = major.classification;
  rep.minor_cls = minor.classification;
  rep.gap_cls = gap.classification;
  rep.symbolic = gap.symbolic;
  rep.heuristic = gap.heuristic;

  if (gap.classification == Classification::ExactConvergent) {
    rep.kind = ErgodicCountReport::Kind::Exact;
    rep.count = 2;
  } else if (gap.classification == Classification::ExactDivergent) {
    rep.kind = ErgodicCountReport::Kind::Exact;
    rep.count = 1;
  } else {
    rep.kind = ErgodicCountReport::Kind::Heuristic;
    rep.count = is_convergent_signal(gap.classification) ? 2 : 1;
  }

  if (rep.count == 2) {
    // Each measure sits on an odometer that follows the dominant column
    // entry; ties keep the current vertex, and the two tracks stay disjoint
    // because equal row sums mirror the comparison across columns.
    for (size_t start = 0; start < 2; ++start) {
      std::vector<size_t> track{start};
      for (long n = 1; n < depth; ++n) {
        IntMatrix f = spec.matrix_at(n);
        const size_t w = track.back();
        size_t next = w;
        if (f.at(0, w) > f.at(1, w)) next = 0;
        else if (f.at(1, w) > f.at(0, w)) next = 1;
        track.push_back(next);
      }
      rep.odometer_tracks.push_back(std::move(track));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stationary Perron-Frobenius

PerronResult stationary_pf(const DiagramSpec& spec, double tol, int max_iterations) {
  const auto* st = std::get_if<StationaryBody>(&spec.body());
  if (!st) throw Error("not-stationary", "Perron-Frobenius data needs a stationary body");
  const IntMatrix& f = st->matrix;
  if (f.rows() != f.cols()) throw Error("not-stationary", "stationary matrix must be square");
  if (!(tol > 0)) throw Error("bad-tolerance", "tolerance must be positive");
  if (!irreducible(f)) throw Error("reducible", "incidence matrix is not irreducible");

  const size_t k = f.rows();
  auto iterate = [&](bool damped) -> std::optional<PerronResult> {
    std::vector<double> x(k, 1.0 / static_cast<double>(k));
    double lambda_prev = 0;
    for (int it = 1; it <= max_iterations; ++it) {
      std::vector<double> y(k, 0.0);
      for (size_t r = 0; r < k; ++r)
        for (size_t c = 0; c < k; ++c)
          y[c] += f.at(r, c).get_d() * x[r];  // A = F^T
      if (damped)
        for (size_t i = 0; i < k; ++i) y[i] += x[i];
      double norm = 0;
      for (double v : y) norm += v;
      double lambda = norm;  // x kept L1-normalized
      for (auto& v : y) v /= norm;
      x = std::move(y);
      if (it > 1 && std::abs(lambda - lambda_prev) < tol) {
        PerronResult res;
        res.lambda = damped ? lambda - 1.0 : lambda;
        res.eigenvector = std::move(x);
        res.iterations = it;
        res.damped = damped;
        return res;
      }
      lambda_prev = lambda;
    }
    return std::nullopt;
  };

  std::optional<PerronResult> res = iterate(false);
  if (!res) res = iterate(true);
  if (!res) throw Error("no-convergence", "power iteration did not converge");

  // normalize so the induced measure has total mass 1: Σ root_v x_v = 1
  double mass = 0;
  for (size_t v = 0; v < k; ++v) mass += spec.root()[v].get_d() * res->eigenvector[v];
  for (auto& v : res->eigenvector) v /= mass;

  // residual guard ‖Ax − λx‖∞ < 10 tol
  double resid = 0;
  for (size_t c = 0; c < k; ++c) {
    double ax = 0;
    for (size_t r = 0; r < k; ++r) ax += f.at(r, c).get_d() * res->eigenvector[r];
    resid = std::max(resid, std::abs(ax - res->lambda * res->eigenvector[c]));
  }
  if (resid >= 10 * tol) throw Error("no-convergence", "residual too large after iteration");
  return *res;
}

}  // namespace adic
