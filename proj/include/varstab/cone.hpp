#pragma once

#include <optional>
#include <vector>

#include "varstab/index_set.hpp"
#include "varstab/lp.hpp"
#include "varstab/matrix.hpp"

namespace varstab {

/// Cone {z : a_i z = 0 (i in eq), a_i z <= 0 (otherwise)}.
struct HCone {
  std::size_t dim = 0;
  std::vector<Vec> rows;
  IndexSet eq;

  HCone() = default;
  explicit HCone(std::size_t d) : dim(d) {}

  static HCone whole(std::size_t d) { return HCone(d); }
  static HCone zero(std::size_t d);
  static HCone nonpos_orthant(std::size_t d);

  std::size_t add_ineq(Vec a);
  std::size_t add_eq(Vec a);
  std::size_t num_rows() const { return rows.size(); }
  IndexSet all_rows() const { return IndexSet::range(rows.size()); }

  bool member(const Vec& z) const;
  /// {i : a_i z = 0}
  IndexSet active(const Vec& z) const;
};

/// Cone generated by rays (nonnegative combinations) and lines (free).
struct VCone {
  std::size_t dim = 0;
  std::vector<Vec> rays;
  std::vector<Vec> lines;

  VCone() = default;
  explicit VCone(std::size_t d) : dim(d) {}
  VCone(std::size_t d, std::vector<Vec> r, std::vector<Vec> l);

  void add_ray(Vec r);
  void add_line(Vec l);
  bool member(const Vec& z) const;
  /// Nonnegative ray coefficients and free line coefficients reproducing z.
  std::optional<std::pair<Vec, Vec>> decompose(const Vec& z) const;
};

/// Polyhedron {z : A z <= d, E z = c}.
struct PolySet {
  std::size_t dim = 0;
  std::vector<Vec> A;
  Vec d;
  std::vector<Vec> E;
  Vec c;

  PolySet() = default;
  explicit PolySet(std::size_t n) : dim(n) {}

  void add_le(Vec a, Rational rhs);
  void add_eq(Vec a, Rational rhs);
  bool contains(const Vec& z) const;
  IndexSet active_ineq(const Vec& z) const;
  bool empty() const;
  std::optional<Vec> some_point() const;
  /// LP over the set with an optional objective.
  LinProgram as_lp() const;
};

struct FaceId {
  IndexSet J;
  friend bool operator==(const FaceId&, const FaceId&) = default;
  friend auto operator<=>(const FaceId&, const FaceId&) = default;
};

/// Coefficient vector of a block-structured LP: `a` placed at `offset`.
Vec pad(const Vec& a, std::size_t offset, std::size_t total);
/// Adds the cone's rows acting on variables [offset, offset + dim).
void embed(LinProgram& lp, const HCone& c, std::size_t offset);
void embed(LinProgram& lp, const PolySet& P, std::size_t offset);

/// Moves implicit equalities into `eq` (one LP).
HCone canonicalize(const HCone& c);
/// Canonical face index set generated by forcing rows `J` to equality.
IndexSet closure(const HCone& c, IndexSet J);
/// Relative interior point of the face with equality set J (J canonical).
std::optional<Vec> ri_point(const HCone& c, IndexSet J);

std::vector<FaceId> faces(const HCone& c);
HCone face_cone(const HCone& c, const FaceId& f);
std::vector<Vec> face_diff(const HCone& c, const FaceId& f);

VCone polar(const HCone& c);
HCone polar_v(const VCone& v);
/// Extreme rays and lineality basis (double description).
VCone generators(const HCone& c);
/// Irredundant half-space description (double description on the polar).
HCone hrep(const VCone& v);

HCone tangent_cone(const PolySet& D, const Vec& z);
VCone normal_cone(const PolySet& D, const Vec& z);
/// Critical cone T_D(z) cap [zstar]^perp. Uses the rows of tangent_cone(D, z)
/// with an enlarged equality set.
HCone critical_cone(const PolySet& D, const Vec& z, const Vec& zstar);

HCone tangent_at(const HCone& K, const Vec& w);
VCone normal_at(const HCone& K, const Vec& w);
FaceId minimal_face(const HCone& K, const Vec& w);
bool ri_contains(const HCone& K, const FaceId& f, const Vec& w);

bool is_trivial(const HCone& c);
bool is_trivial(const VCone& c);
/// A nonzero element of the cone, if any.
std::optional<Vec> nonzero_element(const HCone& c);

bool contains(const HCone& big, const HCone& small);
bool contains(const VCone& big, const VCone& small);
bool contains(const HCone& big, const VCone& small);
bool same_set(const HCone& a, const HCone& b);
bool same_set(const VCone& a, const VCone& b);

/// Image of a cone under a linear map.
HCone image(const HCone& c, const RatMatrix& M);
/// Preimage {z : M z in c}.
HCone preimage(const HCone& c, const RatMatrix& M);
HCone intersect(const HCone& a, const HCone& b);

/// Projection of a polyhedron onto the coordinates in `keep`.
PolySet project(const PolySet& P, const std::vector<std::size_t>& keep);
bool contains(const PolySet& big, const PolySet& small);
/// The unique point of P when P is a singleton.
std::optional<Vec> singleton_point(const PolySet& P);
bool same_set(const PolySet& a, const PolySet& b);

/// Linear map selecting coordinates `keep` from a vector of length n.
RatMatrix selector(std::size_t n, const std::vector<std::size_t>& keep);

}  // namespace varstab
