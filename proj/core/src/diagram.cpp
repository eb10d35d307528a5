#include "adic/diagram.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace adic {

namespace {

Int seq_int(const SymbolicSeq& seq, long n, const char* what) {
  Rat v = seq.eval(n);
  if (v.get_den() != 1)
    throw Error("non-integer-family-entry", std::string(what) + " evaluates to " +
                                                rat_to_string(v) + " at level " + std::to_string(n));
  return v.get_num();
}

size_t seq_size(const SymbolicSeq& seq, long n, const char* what) {
  Int v = seq_int(seq, n, what);
  if (v < 1)
    throw Error("non-integer-family-entry",
                std::string(what) + " must be >= 1 at level " + std::to_string(n));
  return static_cast<size_t>(v.get_ui());
}

struct FamilyModel {
  SymbolicSeq sizes;  // |V_n|, n >= 1
  std::function<IntMatrix(long)> build;
  std::optional<SymbolicSeq> row_sum, col_sum, entry_sum;
  std::optional<std::array<SymbolicSeq, 4>> rank2;  // a, c, d, b
};

const SymbolicSeq& param(const FamilyBody& f, const char* key) {
  auto it = f.params.find(key);
  if (it == f.params.end())
    throw Error("bad-family", "family '" + f.name + "' needs parameter '" + key + "'");
  return it->second;
}

FamilyModel family_model(const FamilyBody& f) {
  FamilyModel m;
  if (f.name == "odometer") {
    SymbolicSeq steps = param(f, "steps");
    m.sizes = SymbolicSeq::constant(Rat(1));
    m.build = [steps](long n) {
      IntMatrix out(1, 1);
      out.at(0, 0) = seq_int(steps, n, "odometer steps");
      return out;
    };
    m.row_sum = m.col_sum = m.entry_sum = steps;
  } else if (f.name == "allones") {
    SymbolicSeq sizes = param(f, "sizes");
    m.sizes = sizes;
    m.build = [sizes](long n) {
      return IntMatrix::ones(seq_size(sizes, n + 1, "allones sizes"),
                             seq_size(sizes, n, "allones sizes"));
    };
    m.row_sum = sizes;
    m.col_sum = sizes.shift(1);
    m.entry_sum = sizes * sizes.shift(1);
  } else if (f.name == "rank2-ers") {
    SymbolicSeq a = param(f, "a"), b = param(f, "b"), c = param(f, "c"), d = param(f, "d");
    if (!((a + c) - (d + b)).is_zero())
      throw Error("bad-family", "rank2-ers requires a+c = d+b (equal row sums)");
    m.sizes = SymbolicSeq::constant(Rat(2));
    m.build = [a, b, c, d](long n) {
      IntMatrix out(2, 2);
      out.at(0, 0) = seq_int(a, n, "rank2-ers a");
      out.at(0, 1) = seq_int(c, n, "rank2-ers c");
      out.at(1, 0) = seq_int(d, n, "rank2-ers d");
      out.at(1, 1) = seq_int(b, n, "rank2-ers b");
      return out;
    };
    m.row_sum = a + c;
    if (((a + d) - (c + b)).is_zero()) m.col_sum = a + d;
    m.entry_sum = a + b + c + d;
    m.rank2 = std::array<SymbolicSeq, 4>{a, c, d, b};
  } else if (f.name == "ecs-lastcol2") {
    SymbolicSeq sizes = param(f, "sizes");
    m.sizes = sizes;
    m.build = [sizes](long n) {
      IntMatrix out = IntMatrix::ones(seq_size(sizes, n + 1, "ecs-lastcol2 sizes"),
                                      seq_size(sizes, n, "ecs-lastcol2 sizes"));
      for (size_t r = 0; r < out.rows(); ++r) out.at(r, out.cols() - 1) = 2;
      return out;
    };
    m.row_sum = sizes + SymbolicSeq::constant(Rat(1));
    m.entry_sum = sizes.shift(1) * (sizes + SymbolicSeq::constant(Rat(1)));
  } else if (f.name == "embedded-odometer") {
    SymbolicSeq a = param(f, "a");
    m.sizes = a.shift(-1) + SymbolicSeq::constant(Rat(1));
    m.build = [a, sizes = m.sizes](long n) {
      const size_t rows = seq_size(sizes, n + 1, "embedded-odometer sizes");
      const size_t cols = seq_size(sizes, n, "embedded-odometer sizes");
      if (rows < 2)
        throw Error("non-integer-family-entry",
                    "embedded-odometer needs a_n >= 1 at level " + std::to_string(n));
      IntMatrix out = IntMatrix::ones(rows, cols);
      out.at(0, 0) = seq_int(a, n, "embedded-odometer a");
      for (size_t r = 1; r + 1 < rows; ++r) out.at(r, 0) = 0;
      return out;
    };
    m.col_sum = a + SymbolicSeq::constant(Rat(1));
  } else {
    throw Error("bad-family", "unknown family '" + f.name + "'");
  }
  return m;
}

}  // namespace

DiagramSpec::DiagramSpec(std::vector<Int> root, DiagramBody body)
    : root_(std::move(root)), body_(std::move(body)) {
  if (root_.empty()) throw Error("bad-root", "root vector must be non-empty");
  for (const auto& r : root_)
    if (r < 1) throw Error("bad-root", "root entries must be positive");
  if (const auto* fam = std::get_if<FamilyBody>(&body_)) family_model(*fam);  // validate name/params
}

size_t DiagramSpec::vertex_count(long n) const {
  if (n < 1) throw Error("level-out-of-range", "levels start at 1");
  if (const auto* fam = std::get_if<FamilyBody>(&body_))
    return seq_size(family_model(*fam).sizes, n, "family sizes");
  if (n == 1) return root_.size();
  return matrix_at(n - 1).rows();
}

IntMatrix DiagramSpec::matrix_at(long n) const {
  if (n < 1) throw Error("level-out-of-range", "levels start at 1");
  if (const auto* e = std::get_if<ExplicitBody>(&body_)) {
    if (static_cast<size_t>(n) > e->matrices.size())
      throw Error("level-out-of-range",
                  "explicit body has " + std::to_string(e->matrices.size()) + " matrices, asked for level " +
                      std::to_string(n));
    return e->matrices[static_cast<size_t>(n - 1)];
  }
  if (const auto* s = std::get_if<StationaryBody>(&body_)) return s->matrix;
  if (const auto* p = std::get_if<PeriodicBody>(&body_)) {
    const long np = static_cast<long>(p->prefix.size());
    if (n <= np) return p->prefix[static_cast<size_t>(n - 1)];
    if (p->cycle.empty()) throw Error("level-out-of-range", "periodic body has empty cycle");
    const long idx = (n - np - 1) % static_cast<long>(p->cycle.size());
    return p->cycle[static_cast<size_t>(idx)];
  }
  return family_model(std::get<FamilyBody>(body_)).build(n);
}

std::optional<long> DiagramSpec::max_level() const {
  if (const auto* e = std::get_if<ExplicitBody>(&body_))
    return static_cast<long>(e->matrices.size());
  return std::nullopt;
}

ValidationReport validate(const DiagramSpec& spec, long depth) {
  ValidationReport rep;
  auto add = [&rep](std::string code, long level, long row, long col, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({std::move(code), level, row, col, std::move(msg)});
  };
  if (depth < 1) {
    add("level-out-of-range", depth, -1, -1, "depth must be >= 1");
    return rep;
  }
  size_t prev = spec.root().size();
  for (long n = 1; n <= depth; ++n) {
    IntMatrix f;
    try {
      f = spec.matrix_at(n);
    } catch (const Error& e) {
      add(e.code(), n, -1, -1, e.what());
      return rep;  // later levels are unreachable without this one
    }
    if (f.cols() != prev) {
      add("dimension-mismatch", n, -1, -1,
          "F_" + std::to_string(n) + " has " + std::to_string(f.cols()) + " columns, expected " +
              std::to_string(prev));
      return rep;
    }
    for (size_t r = 0; r < f.rows(); ++r)
      for (size_t c = 0; c < f.cols(); ++c)
        if (f.at(r, c) < 0)
          add("non-integer-family-entry", n, static_cast<long>(r), static_cast<long>(c),
              "negative entry");
    if (auto zr = f.zero_row())
      add("zero-row", n, static_cast<long>(*zr), -1,
          "vertex " + std::to_string(*zr) + " at level " + std::to_string(n + 1) +
              " receives no edge");
    if (auto zc = f.zero_column())
      add("zero-column", n, -1, static_cast<long>(*zc),
          "vertex " + std::to_string(*zc) + " at level " + std::to_string(n) + " emits no edge");
    prev = f.rows();
  }
  return rep;
}

std::vector<std::vector<Int>> heights_up_to(const DiagramSpec& spec, long depth) {
  if (depth < 1) throw Error("level-out-of-range", "depth must be >= 1");
  std::vector<std::vector<Int>> out;
  out.reserve(static_cast<size_t>(depth));
  out.push_back(spec.root());
  for (long n = 1; n < depth; ++n) out.push_back(multiply(spec.matrix_at(n), out.back()));
  return out;
}

std::vector<Int> heights(const DiagramSpec& spec, long level) {
  return heights_up_to(spec, level).back();
}

StochasticMatrix stochastic_at(const DiagramSpec& spec, long n) {
  auto hs = heights_up_to(spec, n + 1);
  const auto& h = hs[static_cast<size_t>(n - 1)];
  const auto& hup = hs[static_cast<size_t>(n)];
  IntMatrix f = spec.matrix_at(n);
  StochasticMatrix out;
  out.level = n;
  out.entries = RatMatrix(f.rows(), f.cols());
  for (size_t v = 0; v < f.rows(); ++v)
    for (size_t w = 0; w < f.cols(); ++w)
      out.entries.at(v, w) = Rat(f.at(v, w) * h[w], hup[v]);
  for (size_t v = 0; v < f.rows(); ++v)
    for (size_t w = 0; w < f.cols(); ++w) out.entries.at(v, w).canonicalize();
  return out;
}

DiagramSpec telescope(const DiagramSpec& spec, std::span<const long> levels) {
  if (levels.size() < 2 || levels.front() != 1)
    throw Error("invalid-level-list", "telescoping needs levels starting at 1");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw Error("invalid-level-list", "levels must be strictly increasing");
  ValidationReport v = validate(spec, levels.back() - 1 > 0 ? levels.back() - 1 : 1);
  if (!v.ok) throw Error("invalid-spec", "cannot telescope an invalid diagram: " +
                                             v.violations.front().message);
  std::vector<IntMatrix> out;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    IntMatrix prod = spec.matrix_at(levels[i]);
    for (long n = levels[i] + 1; n < levels[i + 1]; ++n) prod = multiply(spec.matrix_at(n), prod);
    out.push_back(std::move(prod));
  }
  return DiagramSpec(spec.root(), ExplicitBody{std::move(out)});
}

namespace {
SumCheckReport sum_check(const DiagramSpec& spec, long depth, bool rows) {
  SumCheckReport rep;
  rep.sums.reserve(static_cast<size_t>(depth) + 1);
  // level 0: the root vector as a |V_1| x 1 matrix
  if (rows) {
    for (const auto& r : spec.root())
      if (r != spec.root()[0]) {
        rep.violation_level = 0;
        return rep;
      }
    rep.sums.push_back(spec.root()[0]);
  } else {
    Int total(0);
    for (const auto& r : spec.root()) total += r;
    rep.sums.push_back(total);
  }
  for (long n = 1; n <= depth; ++n) {
    IntMatrix f = spec.matrix_at(n);
    auto s = rows ? f.equal_row_sum() : f.equal_column_sum();
    if (!s) {
      rep.violation_level = n;
      return rep;
    }
    rep.sums.push_back(*s);
  }
  rep.ok = true;
  return rep;
}
}  // namespace

SumCheckReport ers_check(const DiagramSpec& spec, long depth) { return sum_check(spec, depth, true); }
SumCheckReport ecs_check(const DiagramSpec& spec, long depth) { return sum_check(spec, depth, false); }

SymbolicProfile symbolic_profile(const DiagramSpec& spec) {
  SymbolicProfile p;
  const bool root_const =
      std::all_of(spec.root().begin(), spec.root().end(),
                  [&](const Int& r) { return r == spec.root()[0]; });

  if (const auto* fam = std::get_if<FamilyBody>(&spec.body())) {
    FamilyModel m = family_model(*fam);
    p.size = m.sizes;
    p.row_sum = m.row_sum;
    p.col_sum = m.col_sum;
    p.entry_sum = m.entry_sum;
    p.rank2_entries = m.rank2;
    if (m.row_sum && root_const) {
      p.height_step = m.row_sum;
      p.heights_uniform = true;
    }
    return p;
  }
  if (const auto* st = std::get_if<StationaryBody>(&spec.body())) {
    const IntMatrix& f = st->matrix;
    p.size = SymbolicSeq::constant(Rat(Int(f.rows())));
    if (auto rs = f.equal_row_sum()) p.row_sum = SymbolicSeq::constant(Rat(*rs));
    if (auto cs = f.equal_column_sum()) p.col_sum = SymbolicSeq::constant(Rat(*cs));
    Int total(0);
    for (const auto& x : f.data()) total += x;
    p.entry_sum = SymbolicSeq::constant(Rat(total));
    if (f.rows() == 2 && f.cols() == 2)
      p.rank2_entries = std::array<SymbolicSeq, 4>{
          SymbolicSeq::constant(Rat(f.at(0, 0))), SymbolicSeq::constant(Rat(f.at(0, 1))),
          SymbolicSeq::constant(Rat(f.at(1, 0))), SymbolicSeq::constant(Rat(f.at(1, 1)))};
    // exact geometric heights when the root is an eigenvector with a
    // rational eigenvalue: F·root = λ·root
    if (f.rows() == f.cols() && f.cols() == spec.root().size()) {
      std::vector<Int> img = multiply(f, spec.root());
      Rat lambda(img[0], spec.root()[0]);
      lambda.canonicalize();
      bool eigen = true;
      for (size_t i = 0; i < img.size() && eigen; ++i)
        eigen = Rat(img[i], spec.root()[i]) == lambda;
      if (eigen) {
        p.height_step = SymbolicSeq::constant(lambda);
        p.heights_uniform = root_const;
      }
    }
    return p;
  }
  if (const auto* pe = std::get_if<PeriodicBody>(&spec.body())) {
    if (pe->cycle.empty()) return p;
    const unsigned L = static_cast<unsigned>(pe->cycle.size());
    const long np = static_cast<long>(pe->prefix.size());
    const long valid = np + 1;
    auto per_level = [&](auto extract) -> std::optional<SymbolicSeq> {
      std::vector<SeqExpr> cases(L);
      for (unsigned r = 0; r < L; ++r) {
        // levels n ≡ r (mod L), n > |prefix| use cycle[(n - np - 1) mod L]
        long idx = (static_cast<long>(r) - np - 1) % static_cast<long>(L);
        if (idx < 0) idx += L;
        auto v = extract(pe->cycle[static_cast<size_t>(idx)]);
        if (!v) return std::nullopt;
        cases[r] = SeqExpr::constant(*v);
      }
      return SymbolicSeq(L, std::move(cases), valid);
    };
    p.size = per_level([](const IntMatrix& f) -> std::optional<Rat> { return Rat(Int(f.cols())); });
    p.row_sum = per_level([](const IntMatrix& f) -> std::optional<Rat> {
      auto s = f.equal_row_sum();
      return s ? std::optional<Rat>(Rat(*s)) : std::nullopt;
    });
    p.col_sum = per_level([](const IntMatrix& f) -> std::optional<Rat> {
      auto s = f.equal_column_sum();
      return s ? std::optional<Rat>(Rat(*s)) : std::nullopt;
    });
    p.entry_sum = per_level([](const IntMatrix& f) -> std::optional<Rat> {
      Int total(0);
      for (const auto& x : f.data()) total += x;
      return Rat(total);
    });
    bool all2 = std::all_of(pe->cycle.begin(), pe->cycle.end(),
                            [](const IntMatrix& f) { return f.rows() == 2 && f.cols() == 2; });
    if (all2) {
      std::array<std::optional<SymbolicSeq>, 4> e;
      const std::array<std::pair<size_t, size_t>, 4> pos{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
      for (size_t k = 0; k < 4; ++k)
        e[k] = per_level([&pos, k](const IntMatrix& f) -> std::optional<Rat> {
          return Rat(f.at(pos[k].first, pos[k].second));
        });
      if (e[0] && e[1] && e[2] && e[3]) p.rank2_entries = std::array<SymbolicSeq, 4>{*e[0], *e[1], *e[2], *e[3]};
    }
    // uniform heights need every level ERS (prefix checked numerically) and
    // a constant root
    bool prefix_ers = std::all_of(pe->prefix.begin(), pe->prefix.end(), [](const IntMatrix& f) {
      return f.equal_row_sum().has_value();
    });
    if (p.row_sum && prefix_ers && root_const) {
      p.height_step = p.row_sum;
      p.heights_uniform = true;
    }
    return p;
  }
  return p;  // Explicit: finite data, nothing symbolic
}

}  // namespace adic
