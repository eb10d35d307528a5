#include "adic/series.hpp"

#include <algorithm>
#include <sstream>

namespace adic {

bool is_exact(Classification c) {
  return c == Classification::ExactConvergent || c == Classification::ExactDivergent;
}
bool is_convergent_signal(Classification c) {
  return c == Classification::ExactConvergent || c == Classification::LikelyConvergent;
}
bool is_divergent_signal(Classification c) {
  return c == Classification::ExactDivergent || c == Classification::LikelyDivergent;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::ExactConvergent: return "exact-convergent";
    case Classification::ExactDivergent: return "exact-divergent";
    case Classification::LikelyConvergent: return "likely-convergent";
    case Classification::LikelyDivergent: return "likely-divergent";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Σ |e(m)| over the tail of one residue branch.
std::optional<bool> branch_series_convergent(const SeqExpr& e) {
  if (e.is_zero()) return true;
  if (!e.eventual_from()) return std::nullopt;
  const ExpMonomial& n = *e.num().dominant();
  const ExpMonomial& d = *e.den().dominant();
  if (n.base < d.base) return true;
  if (n.base > d.base) return false;
  return static_cast<long>(n.degree) - static_cast<long>(d.degree) <= -2;
}

enum class BranchProduct { Positive, Zero, Infinite };

std::optional<BranchProduct> branch_product(const SeqExpr& f) {
  const SeqExpr one = SeqExpr::constant(Rat(1));
  const SeqExpr s = one - f;
  if (s.is_zero()) return BranchProduct::Positive;
  const auto lim = f.limit();
  if (lim.kind == SeqExpr::Limit::Kind::PlusInfinity) return BranchProduct::Infinite;
  if (lim.kind == SeqExpr::Limit::Kind::MinusInfinity) return std::nullopt;
  if (lim.value <= 0) {
    // factors tend to a non-positive value; not a positive-factor product
    return lim.value == 0 && f.eventual_sign() > 0 ? std::optional(BranchProduct::Zero)
                                                   : std::nullopt;
  }
  if (lim.value > 1) return BranchProduct::Infinite;
  if (lim.value < 1) return BranchProduct::Zero;
  // limit 1: product behaves like exp(-Σ s)
  auto conv = branch_series_convergent(s);
  if (!conv) return std::nullopt;
  if (*conv) return BranchProduct::Positive;
  const int sig = s.eventual_sign();
  if (sig > 0) return BranchProduct::Zero;
  if (sig < 0) return BranchProduct::Infinite;
  return std::nullopt;
}

// Positive terms with ratio rho(m): ratio-limit test, Gauss at limit 1.
std::optional<bool> branch_by_ratio(const SeqExpr& rho) {
  const auto lim = rho.limit();
  if (lim.kind == SeqExpr::Limit::Kind::PlusInfinity) return false;
  if (lim.kind == SeqExpr::Limit::Kind::MinusInfinity) return std::nullopt;
  if (lim.value < 0) return std::nullopt;
  if (lim.value < 1) return true;
  if (lim.value > 1) return false;
  const SeqExpr s = SeqExpr::constant(Rat(1)) - rho;
  if (s.is_zero()) return false;  // constant terms
  const int sig = s.eventual_sign();
  if (sig < 0) return false;  // ratios >= 1 eventually, terms non-decreasing
  if (!s.eventual_from()) return std::nullopt;
  const ExpMonomial& n = *s.num().dominant();
  const ExpMonomial& d = *s.den().dominant();
  if (n.base < d.base) return false;  // Σ s < ∞, terms tend to a positive constant
  const long gap = static_cast<long>(n.degree) - static_cast<long>(d.degree);
  if (gap <= -2) return false;  // same reason
  if (gap == -1) {
    // s ~ c/m: terms ~ C m^{-c} (Gauss); converges iff c > 1
    const Rat c = n.coeff / d.coeff;
    return c > 1;
  }
  return std::nullopt;  // s with limit 1 cannot have gap >= 0; defensive
}

}  // namespace

std::optional<bool> classify_series_convergent(const SymbolicSeq& term) {
  bool all_convergent = true;
  for (const auto& e : term.cases()) {
    auto r = branch_series_convergent(e);
    if (!r) return std::nullopt;
    if (!*r) return false;
    all_convergent = all_convergent && *r;
  }
  return all_convergent;
}

std::optional<ProductClass> classify_product(const SymbolicSeq& factor) {
  bool any_zero = false, any_inf = false;
  for (const auto& f : factor.cases()) {
    auto r = branch_product(f);
    if (!r) return std::nullopt;
    any_zero = any_zero || (*r == BranchProduct::Zero);
    any_inf = any_inf || (*r == BranchProduct::Infinite);
  }
  if (any_zero && any_inf) return std::nullopt;
  if (any_zero) return ProductClass::ZeroLimit;
  if (any_inf) return ProductClass::InfiniteLimit;
  return ProductClass::PositiveLimit;
}

std::optional<bool> classify_series_by_ratio_convergent(const SymbolicSeq& ratio) {
  // Fold one full period into a per-block ratio for each residue subsequence:
  // t(n + P)/t(n) = Π_{j<P} rho(n + j).
  const unsigned p = ratio.period();
  for (unsigned r = 0; r < p; ++r) {
    SeqExpr folded = SeqExpr::constant(Rat(1));
    for (unsigned j = 0; j < p; ++j) {
      const SymbolicSeq shifted = ratio.shift(static_cast<long>(j));
      folded = folded * shifted.cases()[r];
    }
    auto res = branch_by_ratio(folded);
    if (!res) return std::nullopt;
    if (!*res) return false;
  }
  return true;
}

HeuristicOutcome heuristic_series(std::span<const Rat> terms, HeuristicParams params) {
  HeuristicOutcome out;
  out.params = params;
  const long n = static_cast<long>(terms.size());
  const long w = std::min<long>(params.window, std::max<long>(1, n / 2));
  if (n < 4) {
    out.detail = "too few terms";
    return out;
  }
  std::span<const Rat> tail = terms.subspan(static_cast<size_t>(n - w));
  bool all_zero = true;
  for (const auto& t : tail) all_zero = all_zero && t == 0;
  if (all_zero) {
    out.classification = Classification::LikelyConvergent;
    out.detail = "tail terms identically zero over window";
    return out;
  }
  // max ratio of consecutive nonzero |terms| in the window
  bool ratio_ok = true;
  Rat max_ratio(0);
  for (size_t i = 1; i < tail.size(); ++i) {
    Rat prev = abs(tail[i - 1]), cur = abs(tail[i]);
    if (prev == 0) {
      ratio_ok = cur == 0;
      if (!ratio_ok) break;
      continue;
    }
    max_ratio = std::max(max_ratio, Rat(cur / prev));
  }
  if (ratio_ok && max_ratio < params.geometric_threshold) {
    out.classification = Classification::LikelyConvergent;
    out.detail = "tail contraction: max ratio " + rat_to_string(max_ratio) + " < " +
                 rat_to_string(params.geometric_threshold) + " over window";
    return out;
  }
  // terms staying above the floor suggest divergence
  bool above_floor = true;
  for (const auto& t : tail) above_floor = above_floor && abs(t) >= params.divergence_floor;
  if (above_floor) {
    out.classification = Classification::LikelyDivergent;
    out.detail = "tail terms stay >= " + rat_to_string(params.divergence_floor) + " over window";
    return out;
  }
  out.detail = "window tests inconclusive";
  return out;
}

SeriesAnalysis analyze_series(const std::optional<SymbolicSeq>& symbolic_term,
                              std::span<const Rat> terms, HeuristicParams params) {
  SeriesAnalysis out;
  if (symbolic_term) {
    if (auto conv = classify_series_convergent(*symbolic_term)) {
      out.classification =
          *conv ? Classification::ExactConvergent : Classification::ExactDivergent;
      out.symbolic = true;
      return out;
    }
    out.note = "symbolic form present but outside the decidable class";
  }
  out.heuristic = heuristic_series(terms, params);
  out.classification = out.heuristic->classification;
  return out;
}

}  // namespace adic
