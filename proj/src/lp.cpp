#include "varstab/lp.hpp"

#include <stdexcept>

namespace varstab {

LinProgram::LinProgram(std::size_t num_vars) : n_(num_vars), objective_(zeros(num_vars)) {}

void LinProgram::check_dim(const Vec& a) const {
  if (a.size() != n_) throw std::invalid_argument("LinProgram: row has wrong dimension");
}

void LinProgram::set_objective(Vec c) {
  check_dim(c);
  objective_ = std::move(c);
}

void LinProgram::add_eq(Vec a, Rational b) {
  check_dim(a);
  eq_.push_back({std::move(a), std::move(b)});
}

void LinProgram::add_le(Vec a, Rational b) {
  check_dim(a);
  le_.push_back({std::move(a), std::move(b)});
}

void LinProgram::add_ge(Vec a, Rational b) { add_le(-a, -b); }

void LinProgram::add_lt(Vec a, Rational b) {
  check_dim(a);
  lt_.push_back({std::move(a), std::move(b)});
}

void LinProgram::add_gt(Vec a, Rational b) { add_lt(-a, -b); }

void LinProgram::add_upper(std::size_t i, Rational ub) { add_le(unit(n_, i), std::move(ub)); }

void LinProgram::add_lower(std::size_t i, Rational lb) { add_ge(unit(n_, i), std::move(lb)); }

namespace {

// Dense tableau in standard form: minimize c^T y, T y = rhs, y >= 0.
// The last column of each row holds the right-hand side.
struct Tableau {
  std::vector<std::vector<Rational>> t;
  std::vector<std::size_t> basis;
  std::vector<Rational> obj;  // reduced costs, last entry = -objective value
  std::size_t cols = 0;       // structural columns (excluding rhs)

  void pivot(std::size_t r, std::size_t c) {
    auto& pr = t[r];
    const Rational inv = Rational(1) / pr[c];
    for (auto& x : pr) {
      if (!x.is_zero()) x *= inv;
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (!pr[j].is_zero()) row[j] -= f * pr[j];
      }
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i != r) eliminate(t[i]);
    }
    eliminate(obj);
    basis[r] = c;
  }

  void set_cost(const std::vector<Rational>& c) {
    obj.assign(cols + 1, Rational(0));
    for (std::size_t j = 0; j < cols; ++j) obj[j] = c[j];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Rational& cb = c[basis[i]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (!t[i][j].is_zero()) obj[j] -= cb * t[i][j];
      }
    }
  }

  // Returns false when unbounded. Columns with allowed[j] == false never enter.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (allowed[j] && obj[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = t.size();
      Rational best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i][enter].sign() <= 0) continue;
        Rational ratio = t[i][cols] / t[i][enter];
        if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult lp_solve(const LinProgram& lp, Sense sense) {
  if (!lp.lt_rows().empty()) throw std::invalid_argument("lp_solve: strict rows are not supported");
  const std::size_t n = lp.num_vars();
  const auto& eq = lp.eq_rows();
  const auto& le = lp.le_rows();
  const std::size_t m = eq.size() + le.size();
  // Columns: x+ (n), x- (n), slacks (|le|), artificials (m).
  const std::size_t n_struct = 2 * n + le.size();
  const std::size_t n_cols = n_struct + m;

  Tableau tab;
  tab.cols = n_cols;
  tab.t.assign(m, std::vector<Rational>(n_cols + 1, Rational(0)));
  tab.basis.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_eq = i < eq.size();
    const auto& row = is_eq ? eq[i] : le[i - eq.size()];
    const bool flip = row.b.sign() < 0;
    auto& tr = tab.t[i];
    for (std::size_t j = 0; j < n; ++j) {
      Rational a = flip ? -row.a[j] : row.a[j];
      tr[j] = a;
      tr[n + j] = -a;
    }
    if (!is_eq) tr[2 * n + (i - eq.size())] = flip ? Rational(-1) : Rational(1);
    tr[n_struct + i] = 1;
    tr[n_cols] = flip ? -row.b : row.b;
    tab.basis[i] = n_struct + i;
  }

  LpResult res;
  std::vector<Rational> phase1(n_cols, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n_struct + i] = 1;
  tab.set_cost(phase1);
  std::vector<bool> allowed(n_cols, true);
  tab.run(allowed);
  if (tab.obj[n_cols].sign() != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }

  // Drive artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.t.size();) {
    if (tab.basis[i] < n_struct) {
      ++i;
      continue;
    }
    std::size_t c = n_struct;
    for (std::size_t j = 0; j < n_struct; ++j) {
      if (!tab.t[i][j].is_zero()) {
        c = j;
        break;
      }
    }
    if (c == n_struct) {
      tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    tab.pivot(i, c);
    ++i;
  }
  for (std::size_t j = n_struct; j < n_cols; ++j) allowed[j] = false;

  std::vector<Rational> cost(n_cols, Rational(0));
  const Vec& c = lp.objective();
  for (std::size_t j = 0; j < n; ++j) {
    Rational cj = sense == Sense::Max ? -c[j] : c[j];
    cost[j] = cj;
    cost[n + j] = -cj;
  }
  tab.set_cost(cost);
  if (!tab.run(allowed)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  std::vector<Rational> y(n_cols, Rational(0));
  for (std::size_t i = 0; i < tab.t.size(); ++i) y[tab.basis[i]] = tab.t[i][n_cols];
  res.status = LpStatus::Optimal;
  res.point = zeros(n);
  for (std::size_t j = 0; j < n; ++j) res.point[j] = y[j] - y[n + j];
  res.value = dot(c, res.point);
  for (std::size_t k = 0; k < le.size(); ++k) {
    if (dot(le[k].a, res.point) == le[k].b) res.tight.push_back(k);
  }
  return res;
}

std::optional<Vec> feasible_point(const LinProgram& lp) {
  LinProgram copy(lp.num_vars());
  for (const auto& r : lp.eq_rows()) copy.add_eq(r.a, r.b);
  for (const auto& r : lp.le_rows()) copy.add_le(r.a, r.b);
  LpResult res = lp_solve(copy, Sense::Max);
  if (!res.optimal()) return std::nullopt;
  return res.point;
}

std::optional<Vec> strict_feasible_point(const LinProgram& lp) {
  if (lp.lt_rows().empty()) return feasible_point(lp);
  const std::size_t n = lp.num_vars();
  LinProgram ext(n + 1);
  auto widen = [&](const Vec& a) {
    Vec w = a;
    w.emplace_back(0);
    return w;
  };
  for (const auto& r : lp.eq_rows()) ext.add_eq(widen(r.a), r.b);
  for (const auto& r : lp.le_rows()) ext.add_le(widen(r.a), r.b);
  for (const auto& r : lp.lt_rows()) {
    Vec w = widen(r.a);
    w[n] = 1;
    ext.add_le(std::move(w), r.b);
  }
  ext.add_upper(n, Rational(1));
  ext.set_objective(unit(n + 1, n));
  LpResult res = lp_solve(ext, Sense::Max);
  if (!res.optimal() || res.value.sign() <= 0) return std::nullopt;
  res.point.pop_back();
  return res.point;
}

}  // namespace varstab
