#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "adic/measure.hpp"
#include "adic/oracle.hpp"
#include "support/fixtures.hpp"

using namespace adic;
using namespace adic::testing;

TEST_CASE("propagate_down applies the transposed incidence matrix") {
  MeasureVector up{2, {rat(1, 18), rat(1, 18)}};
  MeasureVector down = propagate_down(stationary_sym2(), up);
  CHECK(down.values == std::vector<Rat>{rat(1, 6), rat(1, 6)});

  MeasureVector zero{2, {rat(0), rat(0)}};
  CHECK(propagate_down(stationary_sym2(), zero).values == std::vector<Rat>{rat(0), rat(0)});
}

TEST_CASE("propagation preserves the level mass exactly") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 24; ++trial) {
    DiagramSpec spec = random_spec(gen);
    const long depth = *spec.max_level() + 1;
    MeasureFamily mu = random_measure(spec, depth, trial);
    Rat mass = level_mass(spec, mu.at_level(depth));
    for (long n = depth - 1; n >= 1; --n) CHECK(level_mass(spec, mu.at_level(n)) == mass);
  }
}

TEST_CASE("canonical equal-column-sum measures") {
  // all-ones family: p_w^(n) = 1/(|V_1| ... |V_n|)
  DiagramSpec ones = allones_family("n+1", 2);
  MeasureFamily mu = uniform_ecs_measure(ones, 5);
  Rat denom(1);
  for (long n = 1; n <= 5; ++n) {
    denom *= Rat(Int(n + 1));
    for (const auto& v : mu.at_level(n).values) CHECK(v == 1 / denom);
  }
  CHECK(level_mass(ones, mu.at_level(5)) == 1);
  CHECK(is_compatible(ones, mu));

  // odometer: p^(n) = 1/(a_0 ... a_{n-1}); here root = (1), steps n+1
  DiagramSpec odo = odometer_family("n+1");
  MeasureFamily omu = uniform_ecs_measure(odo, 4);
  CHECK(omu.at_level(4).values[0] == rat(1, 1 * 2 * 3 * 4));

  // embedded odometer family keeps the same uniform values
  DiagramSpec emb = embedded_odometer_family("2^n");
  MeasureFamily emu = uniform_ecs_measure(emb, 4);
  Rat d(1);
  for (long n = 1; n <= 4; ++n) {
    d *= Rat(emb.vertex_count(n));
    for (const auto& v : emu.at_level(n).values) CHECK(v == 1 / d);
  }

  DiagramSpec not_ecs({Int(1), Int(1)}, StationaryBody{mat2(2, 1, 1, 3)});
  CHECK_THROWS_AS(uniform_ecs_measure(not_ecs, 3), Error);
}

TEST_CASE("rank-1 diagrams contract to a point") {
  SimplexState s = simplex_contract(odometer_family("n+1"), 6);
  CHECK(s.extreme_points.size() == 1);
  for (const auto& d : s.step_diameters) CHECK(d == 0);
}

TEST_CASE("squares family diameter ratios from base 2") {
  // one-step ratios (k^2-1)/(k^2+1); the k = 1 map is singular, so start at 2
  SimplexState s = simplex_contract(squares_family(), 10, 2);
  REQUIRE(s.step_diameters.size() == 9);
  Rat expected(1);
  for (long k = 2; k <= 9; ++k) expected *= rat(k * k - 1, k * k + 1);
  CHECK(s.step_diameters.back() / s.step_diameters.front() == expected);
  CHECK(expected > rat(1, 3));

  // and the k = 1 step collapses everything from base 1
  SimplexState collapsed = simplex_contract(squares_family(), 4, 1);
  CHECK(collapsed.step_diameters.back() == 0);
}

TEST_CASE("linear family telescoping diameter product") {
  SimplexState s = simplex_contract(linear_family(), 40, 2);
  Rat ratio = s.step_diameters.back() / s.step_diameters.front();
  CHECK(ratio == rat(2, 39 * 40));
  CHECK(ratio < rat(1, 500));
}

TEST_CASE("simplex nesting: deeper hulls sit inside shallower ones") {
  // 2x2 case: hulls are segments along the mass line; check coordinate-wise
  for (const DiagramSpec& spec : {squares_family(), stationary_sym2()}) {
    SimplexState shallow = simplex_contract(spec, 4, 2);
    SimplexState deep = simplex_contract(spec, 8, 2);
    auto lo = shallow.extreme_points[0].values;
    auto hi = shallow.extreme_points[1].values;
    if (lo[0] > hi[0]) std::swap(lo, hi);
    for (const auto& p : deep.extreme_points) {
      CHECK(p.values[0] >= lo[0]);
      CHECK(p.values[0] <= hi[0]);
    }
  }
}

TEST_CASE("extreme points propagate to compatible families") {
  DiagramSpec spec = squares_family();
  const long N = 6;
  auto h = heights(spec, N);
  for (size_t i = 0; i < 2; ++i) {
    std::vector<Rat> top(2, Rat(0));
    top[i] = Rat(1, h[i]);
    top[i].canonicalize();
    MeasureFamily fam = family_from_top(spec, MeasureVector{N, top});
    CHECK(is_compatible(spec, fam));
    CHECK(level_mass(spec, fam.at_level(1)) == 1);
  }
}

TEST_CASE("z determinant closed forms") {
  CHECK(z_determinant(DiagramSpec({Int(1), Int(1)}, StationaryBody{mat2(9, 1, 1, 9)}), 1) ==
        rat(8, 10));
  // two equal rows: singular
  CHECK(z_determinant(DiagramSpec({Int(1), Int(1)}, StationaryBody{mat2(3, 2, 3, 2)}), 1) == 0);
  // 2x2 ERS: z = (a - d)/r
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    long r = 2 + static_cast<long>(gen() % 20);
    long a = static_cast<long>(gen() % (r + 1));
    long d = static_cast<long>(gen() % (r + 1));
    if (a == 0 || r - d == 0 || d == 0 || r - a == 0) continue;
    DiagramSpec spec({Int(1), Int(1)}, StationaryBody{mat2(a, r - a, d, r - d)});
    CHECK(z_determinant(spec, 1) == rat(a - d, r));
  }
  CHECK_THROWS_AS(z_determinant(DiagramSpec({Int(1), Int(1)}, StationaryBody{mat2(2, 1, 1, 3)}), 1),
                  Error);
}

TEST_CASE("z equals the one-step simplex contraction ratio") {
  std::mt19937_64 gen(32);
  int checked = 0;
  while (checked < 20) {
    long r = 2 + static_cast<long>(gen() % 12);
    long a = 1 + static_cast<long>(gen() % (r - 1));
    long d = 1 + static_cast<long>(gen() % (r - 1));
    DiagramSpec spec({Int(1), Int(1)}, StationaryBody{mat2(a, r - a, d, r - d)});
    SimplexState upper = simplex_contract(spec, 3, 2);
    SimplexState lower = simplex_contract(spec, 3, 1);
    if (upper.step_diameters.back() == 0) continue;
    Rat ratio = lower.step_diameters.back() / upper.step_diameters.back();
    CHECK(ratio == abs(z_determinant(spec, 1)));
    ++checked;
  }
}

TEST_CASE("ergodic counts on the paper families") {
  ErgodicCountReport two = count_ergodic(squares_family(), 24, CountMode::Determinant);
  CHECK(two.kind == ErgodicCountReport::Kind::Exact);
  CHECK(two.count == 2);
  CHECK(two.symbolic);
  CHECK(two.singular_levels == std::vector<long>{1});  // the level-1 matrix is all ones

  ErgodicCountReport one = count_ergodic(linear_family(), 24, CountMode::Determinant);
  CHECK(one.kind == ErgodicCountReport::Kind::Exact);
  CHECK(one.count == 1);

  ErgodicCountReport odo = count_ergodic(odometer_family("n+1"), 8);
  CHECK(odo.kind == ErgodicCountReport::Kind::Exact);
  CHECK(odo.count == 1);

  ErgodicCountReport alt = count_ergodic(alternating_family(), 24, CountMode::Determinant);
  CHECK(alt.kind == ErgodicCountReport::Kind::Exact);
  CHECK(alt.count == 1);
}

TEST_CASE("determinant and diameter modes agree on rank-2 fixtures") {
  for (const DiagramSpec& spec :
       {squares_family(), linear_family(), stationary_sym2(), alternating_family()}) {
    ErgodicCountReport det = count_ergodic(spec, 16, CountMode::Determinant);
    ErgodicCountReport diam = count_ergodic(spec, 16, CountMode::Diameter);
    CHECK(det.count == diam.count);
    CHECK((det.kind == ErgodicCountReport::Kind::Exact) ==
          (diam.kind == ErgodicCountReport::Kind::Exact));
  }
}

TEST_CASE("rank-2 classification with split series and odometer tracks") {
  Rank2Report two = rank2_ers_classify(squares_family(), 16);
  CHECK(two.kind == ErgodicCountReport::Kind::Exact);
  CHECK(two.count == 2);
  CHECK(two.major_cls == Classification::ExactConvergent);
  CHECK(two.minor_cls == Classification::ExactConvergent);
  REQUIRE(two.odometer_tracks.size() == 2);
  // diagonal tracks: the dominant entries sit on the diagonal from level 2 on
  for (long n = 2; n < 16; ++n) {
    CHECK(two.odometer_tracks[0][static_cast<size_t>(n)] == 0);
    CHECK(two.odometer_tracks[1][static_cast<size_t>(n)] == 1);
  }

  Rank2Report one = rank2_ers_classify(linear_family(), 16);
  CHECK(one.count == 1);
  CHECK(one.kind == ErgodicCountReport::Kind::Exact);

  // alternating family: both split series diverge, the min-combination converges
  Rank2Report alt = rank2_ers_classify(alternating_family(), 20);
  CHECK(alt.kind == ErgodicCountReport::Kind::Exact);
  CHECK(alt.count == 1);
  CHECK(alt.major_cls == Classification::ExactDivergent);
  CHECK(alt.minor_cls == Classification::ExactDivergent);

  // constant all-ones matrix: gap terms identically 1
  DiagramSpec flat({Int(1), Int(1)}, StationaryBody{mat2(1, 1, 1, 1)});
  Rank2Report f = rank2_ers_classify(flat, 12);
  CHECK(f.count == 1);
  CHECK(f.kind == ErgodicCountReport::Kind::Exact);
  for (const auto& t : f.gap_terms) CHECK(t == 1);

  CHECK_THROWS_AS(rank2_ers_classify(allones_family("3", 3, 1), 8), Error);
}

TEST_CASE("classifier agreement between the two rank-2 routes") {
  for (const DiagramSpec& spec :
       {squares_family(), linear_family(), alternating_family(), top_heavy_family(),
        stationary_sym2()}) {
    Rank2Report cls = rank2_ers_classify(spec, 16);
    ErgodicCountReport det = count_ergodic(spec, 16, CountMode::Determinant);
    CHECK(cls.count == det.count);
    CHECK((cls.kind == ErgodicCountReport::Kind::Exact) ==
          (det.kind == ErgodicCountReport::Kind::Exact));
  }
}

TEST_CASE("stationary Perron-Frobenius data") {
  PerronResult res = stationary_pf(stationary_sym2(), 1e-9);
  CHECK(res.lambda == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(res.eigenvector[0] == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(res.eigenvector[1] == doctest::Approx(0.5).epsilon(1e-7));

  DiagramSpec unit({Int(1)}, StationaryBody{[] {
                     IntMatrix m(1, 1);
                     m.at(0, 0) = 1;
                     return m;
                   }()});
  PerronResult u = stationary_pf(unit, 1e-9);
  CHECK(u.lambda == doctest::Approx(1.0));
  CHECK(u.eigenvector[0] == doctest::Approx(1.0));

  // irreducible but periodic: needs the damped iteration
  DiagramSpec swap2({Int(1), Int(1)}, StationaryBody{mat2(0, 1, 1, 0)});
  PerronResult p = stationary_pf(swap2, 1e-9);
  CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(p.damped);

  DiagramSpec reducible({Int(1), Int(1)}, StationaryBody{mat2(1, 1, 0, 1)});
  CHECK_THROWS_AS(stationary_pf(reducible, 1e-9), Error);

  CHECK_THROWS_AS(stationary_pf(squares_family(), 1e-9), Error);
}

TEST_CASE("pf residual stays within ten tolerances") {
  for (auto m : {mat2(2, 1, 1, 2), mat2(3, 2, 1, 4), mat2(1, 5, 2, 3)}) {
    DiagramSpec spec({Int(1), Int(1)}, StationaryBody{m});
    const double tol = 1e-10;
    PerronResult res = stationary_pf(spec, tol);
    for (size_t c = 0; c < 2; ++c) {
      double ax = 0;
      for (size_t r = 0; r < 2; ++r) ax += m.at(r, c).get_d() * res.eigenvector[r];
      CHECK(std::abs(ax - res.lambda * res.eigenvector[c]) < 10 * tol);
    }
  }
}

TEST_CASE("pf eigenvector is uniform exactly when the diagram is also ECS") {
  PerronResult res = stationary_pf(stationary_sym2(), 1e-12);
  MeasureFamily ecs = uniform_ecs_measure(stationary_sym2(), 4);
  // x_v / lambda^{n-1} reproduces the canonical values after rationalizing
  Rat lambda = *rationalize(res.lambda, 1e-9);
  Rat x0 = *rationalize(res.eigenvector[0], 1e-9);
  CHECK(lambda == 3);
  CHECK(x0 == rat(1, 2));
  Rat scale(1);
  for (long n = 1; n <= 4; ++n) {
    for (const auto& v : ecs.at_level(n).values) CHECK(v == x0 * scale);
    scale /= lambda;
  }
}
