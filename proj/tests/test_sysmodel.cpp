#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "support.hpp"
#include "varstab/system.hpp"

using namespace varstab;
using testsupport::load_fixture;
using testsupport::sys_from;

namespace {

// g(x,z) = (z - x, z - x + z^2), D = R^2_-, f = -1: Ξ is the segment
// {μ >= 0, μ1 + μ2 = 1} and only the z^2 term bends the multiplier choice.
const char* kCurvedToy = R"({
  "dims": {"l": 0, "n": 1, "s": 2},
  "f": [{"const": "-1"}],
  "g": [{"lin": {"z1": "1", "x1": "-1"}},
        {"lin": {"z1": "1", "x1": "-1"}, "quad": [["z1", "z1", "1"]]}],
  "D": {"dim": 2, "ineq": [["1", "0", "0"], ["0", "1", "0"]]},
  "refpoint": {"p": [], "x": ["0"]}
})";

}  // namespace

TEST_CASE("derived maps of the worked example") {
  const VarSystem sys = load_fixture("ex_socic.json");
  const PolyFunc2 gt = derive_gtilde(sys);
  // g̃(p,x) = (p2 - x1 + 2x2, -x1 - 2x2)
  CHECK(gt.jacobian(sys.px()) == RatMatrix::from_ints({{0, 1, -1, 2}, {0, 0, -1, -2}}));
  CHECK(gt.eval(from_ints({3, 5, 7, 11})) == from_ints({5 - 7 + 22, -7 - 22}));
  CHECK(derive_b_at(sys, sys.pbar, sys.xbar) == RatMatrix::from_ints({{0, 1}, {0, 1}}));
  CHECK(derive_b_at(sys, from_ints({4, -1}), from_ints({2, 9})) == RatMatrix::from_ints({{0, 1}, {0, 1}}));
  CHECK(lagrangian_grad_x(sys, zeros(2), sys.pbar, sys.xbar) == RatMatrix::from_ints({{1, 0}, {0, -1}}));
  CHECK(lagrangian_grad(sys, from_ints({3, 4}), sys.pbar, sys.xbar) == sys.f.jacobian(sys.px()));
  CHECK(default_xstar(sys) == zeros(2));
}

TEST_CASE("identity constraint map") {
  const VarSystem sys = sys_from(R"({
    "dims": {"l": 1, "n": 2, "s": 2},
    "f": [{"lin": {"x1": "1"}}, {"lin": {"x2": "1"}}],
    "g": [{"lin": {"z1": "1"}}, {"lin": {"z2": "1"}}],
    "D": {"dim": 2, "ineq": [["1", "0", "0"], ["0", "1", "0"]]},
    "refpoint": {"p": ["0"], "x": ["0", "0"]}
  })");
  CHECK(gtilde_jacobian(sys, sys.pbar, sys.xbar) == RatMatrix::from_ints({{0, 1, 0}, {0, 0, 1}}));
  CHECK(derive_b_at(sys, sys.pbar, sys.xbar) == RatMatrix::identity(2));
}

TEST_CASE("quadratic term of the six-inequality system enters the b-term gradient") {
  const VarSystem sys = load_fixture("ex_nondegen6.json");
  Vec lambda = from_ints({1, 2, 3, 4, 5, 6});
  RatMatrix G = bterm_grad(sys, lambda);
  RatMatrix expected(4, 4);
  expected(0, 0) = 10;  // 2 λ5 from z1^2 in the fifth constraint
  CHECK(G == expected);
  CHECK(!sys.g.is_affine());
}

TEST_CASE("chain rule for the substituted constraint map") {
  std::mt19937_64 rng(3);
  const VarSystem six = load_fixture("ex_nondegen6.json");
  for (int t = 0; t < 50; ++t) {
    Vec x = testsupport::rand_vec(rng, 4);
    RatMatrix Jg = six.g.jacobian(concat(x, x));
    RatMatrix expected = Jg.col_block(0, 4) + Jg.col_block(4, 4);
    CHECK(gtilde_jacobian(six, {}, x) == expected);
  }
}

TEST_CASE("Robinson-type multiplier set of the worked example is trivial") {
  const VarSystem sys = load_fixture("ex_socic.json");
  const MultiplierPoly xi = multiplier_Xi(sys, sys.px(), default_xstar(sys));
  CHECK(xi.set.contains(zeros(2)));
  auto pt = xi.set.some_point();
  REQUIRE(pt);
  CHECK(*pt == zeros(2));
  LinProgram lp = xi.set.as_lp();
  lp.set_objective(from_ints({1, 1}));
  CHECK(lp_solve(lp, Sense::Max).value == 0);

  for (auto u : {from_ints({1, 0}), from_ints({-1, 0}), from_ints({-2, 1})}) {
    auto strata = multiplier_LambdaTilde(sys, sys.px(), default_xstar(sys), concat(zeros(2), u));
    if (strata.empty()) continue;
    REQUIRE(strata.size() == 1);
    CHECK(strata[0].rep == zeros(2));
  }
  // u = (-1, 0) gives ∇₂g̃u = (1, 1), outside T_D.
  CHECK(multiplier_Xi_dir(sys, sys.px(), zeros(2), from_ints({0, 0, -1, 0})).set.empty());
  CHECK(!multiplier_Xi_dir(sys, sys.px(), zeros(2), from_ints({0, 0, 1, 0})).set.empty());
}

TEST_CASE("unconstrained D has only the zero multiplier") {
  const VarSystem sys = sys_from(R"({
    "dims": {"l": 0, "n": 1, "s": 1},
    "f": [{"lin": {"x1": "1"}}],
    "g": [{"lin": {"z1": "1"}}],
    "D": {"dim": 1},
    "refpoint": {"p": [], "x": ["0"]}
  })");
  const Vec y = zeros(2);
  auto zero_rhs = multiplier_Lambda(sys, y, zeros(2));
  CHECK(zero_rhs.set.contains(zeros(1)));
  CHECK(!zero_rhs.set.contains(from_ints({1})));
  CHECK(multiplier_Lambda(sys, y, from_ints({0, 1})).set.empty());
}

TEST_CASE("directional multipliers pick the curvature-maximizing vertex") {
  // g(z) = (z, z + z^2) at y = 0 with y* = (0, 2): Λ = {λ >= 0, λ1 + λ2 = 2}.
  const VarSystem sys = sys_from(R"({
    "dims": {"l": 0, "n": 1, "s": 2},
    "f": [{"const": "0"}],
    "g": [{"lin": {"z1": "1"}}, {"lin": {"z1": "1"}, "quad": [["z1", "z1", "1"]]}],
    "D": {"dim": 2, "ineq": [["1", "0", "0"], ["0", "1", "0"]]},
    "refpoint": {"p": [], "x": ["0"]}
  })");
  const Vec y = zeros(2), ystar = from_ints({0, 2});
  auto lam = multiplier_Lambda(sys, y, ystar);
  CHECK(lam.set.contains(from_ints({2, 0})));
  CHECK(lam.set.contains(from_ints({1, 1})));
  auto dir = multiplier_Lambda_dir(sys, y, ystar, from_ints({0, 1}));
  CHECK(dir.set.contains(from_ints({0, 2})));
  CHECK(!dir.set.contains(from_ints({1, 1})));
  CHECK(!dir.set.contains(from_ints({2, 0})));
  CHECK_THROWS_AS(multiplier_Lambda_dir(sys, y, from_ints({0, -1}), from_ints({0, 1})), MultiplierError);
}

TEST_CASE("unbounded directional argmax is reported") {
  // Λ = {λ >= 0 : λ1 = 1} with curvature 2λ2: no maximizer.
  const VarSystem sys = sys_from(R"({
    "dims": {"l": 0, "n": 1, "s": 2},
    "f": [{"const": "0"}],
    "g": [{"lin": {"z1": "1"}}, {"quad": [["z1", "z1", "1"]]}],
    "D": {"dim": 2, "ineq": [["1", "0", "0"], ["0", "1", "0"]]},
    "refpoint": {"p": [], "x": ["0"]}
  })");
  CHECK_THROWS_WITH_AS(multiplier_Lambda_dir(sys, zeros(2), from_ints({0, 1}), from_ints({0, 1})),
                       "directional multiplier set undefined (unbounded)", MultiplierError);
}

TEST_CASE("affine constraints: directional multipliers equal plain multipliers") {
  const VarSystem sys = load_fixture("ex_socic.json");
  const Vec y = sys.ybar();
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Vec ystar = sys.g.jacobian(y).transpose() * from_ints({long(rng() % 3), long(rng() % 3)});
    auto a = multiplier_Lambda(sys, y, ystar);
    auto b = multiplier_Lambda_dir(sys, y, ystar, testsupport::rand_vec(rng, 6));
    CHECK(same_set(a.set, b.set));
  }
}

TEST_CASE("curvature filters the directional multiplier strata") {
  const VarSystem sys = sys_from(kCurvedToy);
  const Vec xstar = default_xstar(sys);
  CHECK(xstar == from_ints({1}));
  auto xi = multiplier_Xi_dir(sys, sys.px(), xstar, from_ints({1}));
  CHECK(xi.set.contains(Vec{Rational(1, 2), Rational(1, 2)}));
  auto strata = multiplier_LambdaTilde(sys, sys.px(), xstar, from_ints({1}));
  REQUIRE(strata.size() == 1);
  CHECK(strata[0].rep == from_ints({0, 1}));
  // Zero direction: no curvature, all three strata of the segment survive.
  CHECK(multiplier_LambdaTilde(sys, sys.px(), xstar, from_ints({0})).size() == 3);
}

TEST_CASE("reference infeasibility is rejected") {
  CHECK_THROWS_AS(sys_from(R"({
    "dims": {"l": 0, "n": 1, "s": 1},
    "f": [{"const": "0"}],
    "g": [{"const": "1"}],
    "D": {"dim": 1, "ineq": [["1", "0"]]},
    "refpoint": {"p": [], "x": ["0"]}
  })"),
                  SchemaError);
}
