#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "varstab/cone.hpp"
#include "varstab/system.hpp"

namespace varstab {

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One polyhedral piece of S(p) coming from the active-set patterns in `patterns`.
struct SolutionPiece {
  std::vector<IndexSet> patterns;
  PolySet x_set;
  /// (x, μ_I, ν) for the first pattern: μ over the active inequality rows, ν over equality rows.
  PolySet lifted;
  /// Set when x_set is a single point.
  std::optional<Vec> point;
};

struct SolutionPieces {
  Vec p;
  std::vector<SolutionPiece> pieces;
  bool empty() const { return pieces.empty(); }
  bool contains(const Vec& x) const;
  /// Points of the singleton pieces.
  std::vector<Vec> points() const;
  bool finite() const;
};

/// S(p) for affine f and g by active-set enumeration.
SolutionPieces solve_solution_map(const VarSystem& sys, const Vec& p);

/// −f(p,x) ∈ b(p,x)ᵀ N_D(g̃(p,x)), decided by a conic-combination LP.
bool verify_solution(const VarSystem& sys, const Vec& p, const Vec& x);

struct RatioSample {
  Vec p, p2, x;
  /// Squared ratio; meaningless when `infinite` is set.
  Rational ratio_sq;
  bool infinite = false;
};

struct RatioTable {
  std::vector<RatioSample> samples;
  std::size_t skipped = 0;
  std::optional<std::size_t> argmax;
  bool unbounded() const;
  /// Largest finite squared ratio (0 without samples).
  Rational max_sq() const;
};

struct CalmnessReport {
  RatioTable table;
  /// False when S(p̄) has a point other than x̄ within the box.
  bool reference_isolated = true;
  std::optional<Vec> reference_witness;
};

/// ‖x − x̄‖² / ‖p − p̄‖² over points of S(p) with ‖x − x̄‖∞ <= radius.
CalmnessReport sample_calmness(const VarSystem& sys, const std::vector<Vec>& grid, const Rational& radius = 1);

/// dist(x, S(p2))² / ‖p − p2‖² over pairs of grid points with p − p̄, p2 − p̄ ∈ TP
/// and x ∈ S(p) in the box. Empty S(p2) gives an infinite ratio.
RatioTable sample_aubin(const VarSystem& sys, const std::vector<Vec>& grid, const std::optional<HCone>& TP,
                        const Rational& radius = 1);

}  // namespace varstab
