#pragma once

#include <optional>
#include <vector>

#include "varstab/matrix.hpp"

namespace varstab {

/// Linear program over free real variables with exact rational data.
/// Rows are stored as (coefficients, rhs); `>=` and `>` rows are negated on
/// insertion so only `=`, `<=` and `<` are kept.
class LinProgram {
 public:
  explicit LinProgram(std::size_t num_vars);

  std::size_t num_vars() const { return n_; }

  void set_objective(Vec c);
  const Vec& objective() const { return objective_; }

  void add_eq(Vec a, Rational b);
  void add_le(Vec a, Rational b);
  void add_ge(Vec a, Rational b);
  void add_lt(Vec a, Rational b);
  void add_gt(Vec a, Rational b);

  /// Bounds a single variable: x_i <= ub.
  void add_upper(std::size_t i, Rational ub);
  void add_lower(std::size_t i, Rational lb);

  struct Row {
    Vec a;
    Rational b;
  };
  const std::vector<Row>& eq_rows() const { return eq_; }
  const std::vector<Row>& le_rows() const { return le_; }
  const std::vector<Row>& lt_rows() const { return lt_; }

 private:
  void check_dim(const Vec& a) const;

  std::size_t n_;
  Vec objective_;
  std::vector<Row> eq_;
  std::vector<Row> le_;
  std::vector<Row> lt_;
};

enum class Sense { Max, Min };
enum class LpStatus { Infeasible, Unbounded, Optimal };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  Vec point;
  /// Indices of `<=` rows that hold with equality at `point`.
  std::vector<std::size_t> tight;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase dense tableau simplex with Bland's rule. Strict rows are
/// rejected with std::invalid_argument.
LpResult lp_solve(const LinProgram& lp, Sense sense);

/// A point satisfying all rows, strict rows strictly, or nullopt.
std::optional<Vec> strict_feasible_point(const LinProgram& lp);

/// Feasibility of the weak system (strict rows not allowed).
std::optional<Vec> feasible_point(const LinProgram& lp);

}  // namespace varstab
