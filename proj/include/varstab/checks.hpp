#pragma once

#include <optional>
#include <vector>

#include "varstab/cone.hpp"
#include "varstab/graphder.hpp"
#include "varstab/system.hpp"
#include "varstab/verdict.hpp"

namespace varstab {

/// One relatively open cell of a hyperplane arrangement restricted to a cone.
struct Cell {
  /// Sign (-1, 0, +1) of each hyperplane on the cell.
  std::vector<int> signs;
  /// Sign (-1 or 0) of each row of the base cone.
  std::vector<int> base_signs;
  HCone closure;
  Vec rep;
  bool is_zero() const { return is_zero_vec; }
  bool is_zero_vec = false;
};

struct Stratification {
  HCone base;
  std::vector<Vec> hyperplanes;
  std::vector<Cell> cells;
  /// Index of the cell whose relative interior contains v.
  std::optional<std::size_t> locate(const Vec& v) const;
};

Stratification stratify_directions(const HCone& base, const std::vector<Vec>& hyperplanes);

Verdict check_robinson_cq(const VarSystem& sys);
Verdict check_assumption1(const VarSystem& sys);

/// ker(jacᵀ) ∩ span N_{T_D(zref)}(image_dir) = {0}, cross-checked against
/// jac·R^m + lin T_{T_D(zref)}(image_dir) = R^s.
Verdict check_nondegen_dir(const RatMatrix& jac, const PolySet& D, const Vec& zref, const Vec& image_dir);
/// Non-degeneracy of g̃(·) ∈ D in direction v ∈ R^{l+n} at (p̄,x̄).
Verdict check_nondegen_dir(const VarSystem& sys, const Vec& v);

/// Directional regularity of (y,μ) ↦ (g̃(y),μ) − gph N_D. Throws
/// std::invalid_argument unless (λ,η) ∈ Θ(ȳ,v).
Verdict check_F_dirmetreg(const VarSystem& sys, const Vec& v, const Vec& lambda, const Vec& eta);

Verdict check_socic_dir(const VarSystem& sys, const Vec& u);
Verdict check_socic(const VarSystem& sys);
Verdict check_isolated_calmness(const VarSystem& sys);
Verdict check_metreg_M_dir(const VarSystem& sys, const Vec& qu);

/// One (q,u) region where the second Aubin condition breaks down.
struct AubinFailure {
  std::string kind;  // "nondegeneracy" or "face-pair"
  std::size_t stratum = 0;
  Vec lambda;
  FacePair pair;
  /// Cone of (q, u, σ) with η = Σ σ_i a_i over the rows of F1.
  HCone lifted;
  /// Directions q where the breakdown happens (inside T_P).
  VCone q_rays;
  Vec witness_q, witness_u, witness_w, eta;
};

/// All breakdown regions of the second Aubin condition for q ∈ TP.
std::vector<AubinFailure> aubin_condition_failures(const VarSystem& sys, const HCone& TP);

/// Aubin property relative to P, with TP the tangent cone of P at p̄ (the
/// whole parameter space when absent from the system).
Verdict check_rel_aubin(const VarSystem& sys);
Verdict check_rel_aubin(const VarSystem& sys, const HCone& TP);

}  // namespace varstab
