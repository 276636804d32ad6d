#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varstab/cone.hpp"
#include "varstab/matrix.hpp"

namespace varstab {

/// One output of a degree-2 polynomial map: c + lin·y + yᵀ Q y, Q symmetric.
struct PolyComponent {
  Rational c;
  Vec lin;
  RatMatrix Q;
};

/// Vector-valued polynomial map of total degree <= 2.
class PolyFunc2 {
 public:
  PolyFunc2() = default;
  PolyFunc2(std::size_t in_dim, std::size_t out_dim);

  std::size_t in_dim() const { return in_; }
  std::size_t out_dim() const { return comps_.size(); }

  PolyComponent& comp(std::size_t k) { return comps_.at(k); }
  const PolyComponent& comp(std::size_t k) const { return comps_.at(k); }

  /// Adds the monomial r * y_i * y_j to component k (i == j gives r * y_i^2).
  void add_monomial(std::size_t k, std::size_t i, std::size_t j, const Rational& r);

  Vec eval(const Vec& y) const;
  RatMatrix jacobian(const Vec& y) const;
  RatMatrix hessian(std::size_t k) const;
  /// yᵀ Q_k y
  Rational quad_form(std::size_t k, const Vec& y) const;
  bool is_affine() const;

  /// w ↦ self(P w)
  PolyFunc2 compose_linear(const RatMatrix& P) const;

  friend bool operator==(const PolyFunc2&, const PolyFunc2&);

 private:
  std::size_t in_ = 0;
  std::vector<PolyComponent> comps_;
};

/// 0 ∈ f(p,x) + N̂_Γ(p,x)(x),  Γ(p,x) = {z : g(p,x,z) ∈ D}.
struct VarSystem {
  std::size_t l = 0, n = 0, s = 0;
  PolyFunc2 f;  // (p,x) -> R^n
  PolyFunc2 g;  // (p,x,z) -> R^s
  PolySet D;
  Vec pbar, xbar;
  std::optional<HCone> TP;

  /// Checks dimensions and reference feasibility; throws std::invalid_argument.
  void validate() const;

  Vec px() const { return concat(pbar, xbar); }
  Vec ybar() const { return concat(px(), xbar); }
  /// (p,x) ↦ (p,x,x)
  RatMatrix embed() const;
  bool affine() const { return f.is_affine() && g.is_affine(); }
};

PolyFunc2 derive_gtilde(const VarSystem& sys);
/// b(p,x) = ∇₃g(p,x,x), an s×n matrix.
RatMatrix derive_b_at(const VarSystem& sys, const Vec& p, const Vec& x);
/// ∇g̃(p,x), an s×(l+n) matrix.
RatMatrix gtilde_jacobian(const VarSystem& sys, const Vec& p, const Vec& x);
/// Columns of a (l+n)-column matrix belonging to x.
RatMatrix x_block(const VarSystem& sys, const RatMatrix& M);

/// Matrices M_k with ∇(b(·)ᵀλ)(p,x) = Σ_k λ_k M_k (constant since g has degree <= 2).
std::vector<RatMatrix> bterm_parts(const VarSystem& sys);
RatMatrix bterm_grad(const VarSystem& sys, const Vec& lambda);
/// ∇Lag_λ(p,x) = ∇f(p,x) + ∇(b(·)ᵀλ)(p,x), an n×(l+n) matrix.
RatMatrix lagrangian_grad(const VarSystem& sys, const Vec& lambda, const Vec& p, const Vec& x);
RatMatrix lagrangian_grad_x(const VarSystem& sys, const Vec& lambda, const Vec& p, const Vec& x);

/// Coefficients c with vᵀ∇²(λᵀg)v = c·λ.
Vec curvature_coeffs(const VarSystem& sys, const Vec& v);

Vec default_xstar(const VarSystem& sys);

/// N_D(z) as a canonical half-space cone in R^s.
HCone normal_cone_hrep(const PolySet& D, const Vec& z);

enum class MultTag { Lambda, LambdaDir, Xi, XiDir, LambdaTilde };
std::string to_string(MultTag t);

struct MultiplierPoly {
  MultTag tag;
  PolySet set;
};

class MultiplierError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Λ(y,y*) = {λ ∈ N_D(g(y)) : ∇g(y)ᵀλ = y*}
MultiplierPoly multiplier_Lambda(const VarSystem& sys, const Vec& y, const Vec& ystar);
/// argmax of vᵀ∇²(λᵀg)(y)v over Λ(y,y*). Throws MultiplierError when Λ is
/// empty or the objective is unbounded.
MultiplierPoly multiplier_Lambda_dir(const VarSystem& sys, const Vec& y, const Vec& ystar, const Vec& v);
MultiplierPoly multiplier_Xi(const VarSystem& sys, const Vec& px, const Vec& xstar);
MultiplierPoly multiplier_Xi_dir(const VarSystem& sys, const Vec& px, const Vec& xstar, const Vec& qu);

/// Part of a multiplier polyhedron lying in the relative interior of one face
/// of N_D. `closure` is the polyhedron intersected with the face.
struct MultiplierStratum {
  FaceId face;
  PolySet closure;
  Vec rep;
  /// Critical cone K_D(z, λ) for λ in the stratum (rows of T_D(z)).
  HCone critical;
};

std::vector<MultiplierStratum> stratify_multipliers(const PolySet& D, const Vec& z, const PolySet& M);

/// Λ̃((p,x),x*;(q,u)) as a list of strata. For affine g this is the
/// stratification of Ξ((p,x),x*;(q,u)); for quadratic g a stratum is kept iff
/// its points maximize the curvature objective over their own Λ-set.
std::vector<MultiplierStratum> multiplier_LambdaTilde(const VarSystem& sys, const Vec& px, const Vec& xstar,
                                                      const Vec& qu);

}  // namespace varstab
