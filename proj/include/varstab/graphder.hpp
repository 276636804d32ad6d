#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varstab/cone.hpp"
#include "varstab/system.hpp"
#include "varstab/verdict.hpp"

namespace varstab {

/// Faces F2 ⊆ F1 of a cone K (so J_F1 ⊆ J_F2) with the difference cone
/// F1 − F2 = {a_i z = 0 on J_F1, a_i z <= 0 on J_F2 \ J_F1} and its polar.
struct FacePair {
  FaceId F1, F2;
  HCone diff;
  VCone diff_polar;
};

FacePair make_face_pair(const HCone& K, const FaceId& F1, const FaceId& F2);

/// Pairs of faces of K with w ∈ F2 ⊆ F1 ⊆ [eta]^⊥ (no eta: no orthogonality filter).
std::vector<FacePair> nested_face_pairs(const HCone& K, const Vec& w, const std::optional<Vec>& eta);

/// (w, eta) ∈ T_{gph N_D}(z, zstar) = gph N_{K_D(z,zstar)}.
/// Throws std::invalid_argument when (z, zstar) is not in gph N_D.
bool gph_normal_tangent_member(const PolySet& D, const Vec& z, const Vec& zstar, const Vec& w, const Vec& eta);

/// (λ, η) ∈ Θ(ȳ, v) at the reference point ȳ = (p̄, x̄).
bool theta_member(const VarSystem& sys, const Vec& v, const Vec& lambda, const Vec& eta);

/// Face pairs describing the directional limiting normal cone of gph N_D at
/// (z, zstar) in direction (w, eta); empty when (w, eta) is not tangent.
std::vector<FacePair> dir_limiting_normal_gphN(const PolySet& D, const Vec& z, const Vec& zstar, const Vec& w,
                                               const Vec& eta);

struct DerivStratum {
  MultiplierStratum mult;
  /// λ ↦ ∇(b(·)ᵀλ)(p̄,x̄)(q,u), an n×s matrix.
  RatMatrix offset;
  /// N_{K_D(g̃,λ)}(∇g̃(q,u)) in R^s.
  VCone normal;
  /// b(p̄,x̄)ᵀ applied to `normal`.
  VCone cone;
};

/// DΨ((p̄,x̄,x̄),x*)(q,u,u), stratified by the faces of N_D holding λ.
struct DerivSet {
  Vec q, u, w;
  Vec xstar;
  RatMatrix b;
  std::vector<DerivStratum> strata;
  bool empty() const { return strata.empty(); }
};

struct DerivWitness {
  std::size_t stratum = 0;
  Vec lambda, eta;
};

/// Throws std::invalid_argument when x* ∉ G(p̄,x̄).
DerivSet dpsi(const VarSystem& sys, const Vec& xstar, const Vec& qu);
std::optional<DerivWitness> dpsi_member(const DerivSet& d, const Vec& vstar);
std::optional<DerivWitness> dpsi_member(const VarSystem& sys, const Vec& xstar, const Vec& qu, const Vec& vstar);

/// HOLDS when directional regularity of (y,μ) ↦ (g̃(y),μ) − gph N_D certifies
/// that the element ∇(bᵀλ)(q,u) + bᵀη of DΨ also lies in DG.
Verdict dg_lower_witness(const VarSystem& sys, const Vec& xstar, const Vec& qu, const Vec& lambda, const Vec& eta);

/// One polyhedral piece of {(q,u) : 0 ∈ ∇f(p̄,x̄)(q,u) + DΨ(..., −f(p̄,x̄))(q,u,u)}
/// for affine g: multiplier stratum × face F of its critical cone, with
/// ∇g̃(q,u) ∈ F and η = Σ_{i∈J_F} σ_i a_i.
struct DirectionPiece {
  std::size_t stratum = 0;
  Vec lambda;
  HCone critical;
  FaceId face;
  std::vector<std::size_t> sigma_rows;
  /// Variables (q, u, σ).
  HCone lifted;
  /// Variables (q, u, η).
  HCone lifted_eta;
  HCone qu;
  HCone q;
};

/// Throws std::invalid_argument for quadratic g.
std::vector<DirectionPiece> stationary_pieces(const VarSystem& sys);

struct ExistenceResult {
  enum class Kind { Found, None, Inconclusive };
  Kind kind = Kind::None;
  Vec u, lambda, eta;
  std::string note;
};

/// Some u with 0 ∈ ∇f(p̄,x̄)(q,u) + DΨ(..., −f(p̄,x̄))(q,u,u). Exact for affine g;
/// quadratic g only tries the supplied candidates.
ExistenceResult existence_u(const VarSystem& sys, const Vec& q, const std::vector<Vec>& candidates = {});

}  // namespace varstab
