#include <doctest.h>

#include <random>

#include "support.hpp"
#include "varstab/cone.hpp"

using namespace varstab;

namespace {

HCone halfplane() {
  HCone c(2);
  c.add_ineq(from_ints({1, 0}));
  return c;
}

PolySet orthant_set(std::size_t n) {
  PolySet D(n);
  for (std::size_t i = 0; i < n; ++i) D.add_le(unit(n, i), 0);
  return D;
}

}  // namespace

TEST_CASE("canonicalize examples") {
  HCone line(1);
  line.add_ineq(from_ints({1}));
  line.add_ineq(from_ints({-1}));
  CHECK(canonicalize(line).eq == IndexSet{0, 1});

  CHECK(canonicalize(HCone::nonpos_orthant(2)).eq.empty());

  // z1 <= 0 together with the pair z1 - z2 <= 0, z2 - z1 <= 0 which pins z1 = z2.
  HCone three(2);
  three.add_ineq(from_ints({1, 0}));
  three.add_ineq(from_ints({1, -1}));
  three.add_ineq(from_ints({-1, 1}));
  CHECK(canonicalize(three).eq == IndexSet{1, 2});
}

TEST_CASE("face lattice examples") {
  auto f = faces(HCone::nonpos_orthant(2));
  REQUIRE(f.size() == 4);
  CHECK(f[0].J == IndexSet{});
  CHECK(f[3].J == IndexSet{0, 1});
  CHECK(faces(canonicalize(HCone::zero(2))).size() == 1);
  CHECK(faces(halfplane()).size() == 2);
  for (std::size_t k = 1; k <= 5; ++k) CHECK(faces(HCone::nonpos_orthant(k)).size() == (1U << k));
}

TEST_CASE("face cone and face difference") {
  const HCone K = HCone::nonpos_orthant(2);
  HCone F = face_cone(K, {IndexSet{0}});
  CHECK(F.member(from_ints({0, -1})));
  CHECK(!F.member(from_ints({-1, -1})));
  auto d = face_diff(K, {IndexSet{0}});
  REQUIRE(d.size() == 1);
  CHECK(primitive(d[0]) == from_ints({0, 1}));
  CHECK(face_diff(K, {IndexSet{}}).size() == 2);
  CHECK(face_diff(K, {IndexSet{0, 1}}).empty());

  HCone pinned(2);
  pinned.add_ineq(from_ints({1, 0}));
  pinned.add_ineq(from_ints({-1, 0}));
  pinned = canonicalize(pinned);
  CHECK_THROWS_AS(face_cone(pinned, {IndexSet{0}}), std::invalid_argument);
}

TEST_CASE("polar examples") {
  VCone p = polar(HCone::nonpos_orthant(2));
  CHECK(p.rays.size() == 2);
  CHECK(p.member(from_ints({3, 1})));
  CHECK(!p.member(from_ints({-1, 1})));

  VCone all = polar(HCone::zero(2));
  CHECK(all.member(from_ints({-5, 7})));

  HCone h(2);
  h.add_ineq(from_ints({1, 1}));
  VCone ray = polar(h);
  REQUIRE(ray.rays.size() == 1);
  CHECK(ray.rays[0] == from_ints({1, 1}));
  CHECK(ray.lines.empty());
}

TEST_CASE("double description on simple cones") {
  VCone g = generators(HCone::nonpos_orthant(3));
  CHECK(g.rays.size() == 3);
  CHECK(g.lines.empty());

  VCone h = generators(halfplane());
  CHECK(h.rays.size() == 1);
  CHECK(h.lines.size() == 1);
  CHECK(h.rays[0] == from_ints({-1, 0}));

  // A pointed cone in R^3 with 4 facets has 4 extreme rays.
  HCone sq(3);
  sq.add_ineq(from_ints({1, 0, -1}));
  sq.add_ineq(from_ints({-1, 0, -1}));
  sq.add_ineq(from_ints({0, 1, -1}));
  sq.add_ineq(from_ints({0, -1, -1}));
  VCone sg = generators(sq);
  CHECK(sg.rays.size() == 4);
  CHECK(sg.lines.empty());
  CHECK(same_set(hrep(sg), sq));
}

TEST_CASE("tangent and normal cones of the orthant") {
  const PolySet D = orthant_set(2);
  HCone T = tangent_cone(D, from_ints({0, 0}));
  CHECK(same_set(T, HCone::nonpos_orthant(2)));
  VCone N = normal_cone(D, from_ints({0, 0}));
  CHECK(N.member(from_ints({1, 2})));
  CHECK(!N.member(from_ints({-1, 0})));

  HCone T2 = tangent_cone(D, from_ints({0, -1}));
  CHECK(T2.member(from_ints({-1, 5})));
  CHECK(!T2.member(from_ints({1, 0})));
  VCone N2 = normal_cone(D, from_ints({0, -1}));
  CHECK(N2.member(from_ints({2, 0})));
  CHECK(!N2.member(from_ints({0, 1})));

  CHECK_THROWS_WITH(tangent_cone(D, from_ints({1, 0})), "infeasible point");
}

TEST_CASE("critical cones") {
  const PolySet D = orthant_set(2);
  HCone K0 = critical_cone(D, from_ints({0, 0}), from_ints({0, 0}));
  CHECK(same_set(K0, HCone::nonpos_orthant(2)));
  HCone K1 = critical_cone(D, from_ints({0, 0}), from_ints({1, 0}));
  CHECK(K1.eq == IndexSet{0});
  CHECK(K1.member(from_ints({0, -1})));
  CHECK(!K1.member(from_ints({-1, -1})));
  CHECK_THROWS_WITH(critical_cone(D, from_ints({0, 0}), from_ints({-1, 0})), "not a normal vector");

  PolySet line(1);
  HCone K2 = critical_cone(line, from_ints({3}), from_ints({0}));
  CHECK(K2.member(from_ints({-4})));
  CHECK(K2.member(from_ints({4})));
}

TEST_CASE("cone operations at a point") {
  const HCone K = HCone::nonpos_orthant(2);
  HCone T = tangent_at(K, from_ints({-1, 0}));
  CHECK(T.member(from_ints({5, -1})));
  CHECK(!T.member(from_ints({0, 1})));
  VCone N = normal_at(K, from_ints({-1, 0}));
  REQUIRE(N.rays.size() == 1);
  CHECK(N.rays[0] == from_ints({0, 1}));
  CHECK(same_set(tangent_at(K, from_ints({0, 0})), K));
  CHECK(normal_at(K, from_ints({0, 0})).rays.size() == 2);
  CHECK(minimal_face(K, from_ints({0, -2})).J == IndexSet{0});
  CHECK(ri_contains(K, {IndexSet{0}}, from_ints({0, -2})));
  CHECK(!ri_contains(K, {IndexSet{0, 1}}, from_ints({0, -2})));
  CHECK_THROWS(minimal_face(K, from_ints({1, 0})));
  CHECK(is_trivial(canonicalize(HCone::zero(3))));
  CHECK(!is_trivial(K));
}

TEST_CASE("projection of a polyhedron") {
  // Triangle {x >= 0, y >= 0, x + y <= 1} projects to [0, 1].
  PolySet P(2);
  P.add_le(from_ints({-1, 0}), 0);
  P.add_le(from_ints({0, -1}), 0);
  P.add_le(from_ints({1, 1}), 1);
  PolySet I = project(P, {0});
  PolySet expected(1);
  expected.add_le(from_ints({1}), 1);
  expected.add_le(from_ints({-1}), 0);
  CHECK(same_set(I, expected));

  // A point given by equalities.
  PolySet Q(3);
  Q.add_eq(from_ints({1, 0, 0}), 2);
  Q.add_eq(from_ints({0, 1, -1}), 0);
  Q.add_eq(from_ints({0, 0, 1}), Rational(1, 2));
  PolySet q = project(Q, {0, 1});
  CHECK(q.contains(Vec{2, Rational(1, 2)}));
  CHECK(!q.contains(Vec{2, 0}));

  PolySet empty(1);
  empty.add_le(from_ints({1}), -1);
  empty.add_le(from_ints({-1}), 0);
  CHECK(project(empty, {0}).empty());
}

TEST_CASE("face diff polar is the span of the face rows") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t s = 2 + rng() % 2;
    HCone c(s);
    const std::size_t m = 1 + rng() % 4;
    for (std::size_t i = 0; i < m; ++i) c.add_ineq(testsupport::rand_nonzero_vec(rng, s));
    c = canonicalize(c);
    for (const auto& f : faces(c)) {
      HCone sub(s);
      for (const auto& b : face_diff(c, f)) sub.add_eq(b);
      VCone span(s);
      for (auto i : f.J.elements()) span.add_line(c.rows[i]);
      CHECK(same_set(generators(sub), span));
    }
  }
}
