// Acceptance run: one [PASS]/[FAIL] line per criterion. All comparisons are
// exact rational ones; the only tolerances are the wall-clock limits below.

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../property_suite.hpp"
#include "varstab/checks.hpp"
#include "varstab/graphder.hpp"
#include "varstab/io.hpp"
#include "varstab/oracle.hpp"

using namespace varstab;

namespace {

constexpr double kLimitExample5 = 5.0;
constexpr double kLimitExample6 = 10.0;
constexpr double kLimitSixIneq = 30.0;
constexpr double kLimitOracle = 30.0;
constexpr double kLimitProperties = 120.0;
constexpr double kLimitInvariance = 60.0;
constexpr std::uint64_t kSeed = 20261019;
constexpr std::size_t kCases = 200;

VarSystem fixture(const std::string& name) { return load_system(std::string(VARSTAB_FIXTURE_DIR) + "/" + name); }

// Collects failed expectations of one criterion.
struct Log {
  std::vector<std::string> problems;
  std::size_t checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) problems.push_back(what);
  }
};

HCone cone2(std::vector<Vec> ineq, std::vector<Vec> eq = {}) {
  HCone c(2);
  for (auto& r : ineq) c.add_ineq(std::move(r));
  for (auto& r : eq) c.add_eq(std::move(r));
  return c;
}

bool parallel(const Vec& a, const Vec& b) { return primitive(a) == primitive(b); }

// ---------------------------------------------------------------------------
// 1. Second-order example.

void example5(Log& log) {
  const VarSystem ex = fixture("ex_socic.json");
  log.expect(check_robinson_cq(ex).status == Status::Holds, "robinson-cq not HOLDS");

  const Verdict so = check_socic(ex);
  log.expect(so.status == Status::Holds, "socic not HOLDS");
  const RatMatrix b = derive_b_at(ex, ex.pbar, ex.xbar);
  const RatMatrix H = x_block(ex, ex.f.jacobian(ex.px()));
  const RatMatrix J2 = x_block(ex, gtilde_jacobian(ex, ex.pbar, ex.xbar));
  const HCone K = HCone::nonpos_orthant(2);
  std::size_t cells = 0;
  for (const auto& s : so.strata) {
    const Vec* u = s.data.vec("u");
    if (!u) continue;
    ++cells;
    // v = (−u1, 0) substituted into b v ∈ T_K(∇₂g̃ u), vᵀ∇ₓf u < 0.
    const Vec v{-(*u)[0], 0};
    log.expect(tangent_at(K, J2 * *u).member(b * v) && dot(v, H * *u).sign() < 0,
               "witness (-u1,0) rejected in stratum " + s.label);
    log.expect(check_socic_dir(ex, *u).status == Status::Holds, "socic_dir fails in stratum " + s.label);
  }
  log.expect(cells > 0, "socic reported no direction strata");
  log.expect(check_isolated_calmness(ex).status == Status::Holds, "isolated calmness not HOLDS");
  log.expect(check_metreg_M_dir(ex, zeros(4)).status == Status::Holds, "metric regularity at (0,0) not HOLDS");
}

// ---------------------------------------------------------------------------
// 2. Relative Aubin example.

// One row of the direction table: q-conditions on the signs of
// (q2 − q1, q2 − 2q1, q1), then u, ∇g̃(q,u) and the η set in (u, η) space.
struct TableRow {
  std::string name;
  std::function<bool(const std::vector<int>&)> applies;
  std::function<PolySet(const Vec&)> u_eta;
  std::function<Vec(const Vec&)> image;
};

PolySet fixed_point(const Vec& u, const Vec& eta) {
  PolySet P(4);
  const Vec z = concat(u, eta);
  for (std::size_t i = 0; i < 4; ++i) P.add_eq(unit(4, i), z[i]);
  return P;
}

std::vector<TableRow> direction_table() {
  const Rational half(1, 2);
  return {
      {"q1>=0, q2-q1<=0", [](const std::vector<int>& s) { return s[2] >= 0 && s[0] <= 0; },
       [](const Vec& q) { return fixed_point(Vec{q[0], 0}, zeros(2)); },
       [](const Vec& q) { return Vec{q[1] - q[0], -q[0]}; }},
      {"q2-q1<=0, q2-2q1<0", [](const std::vector<int>& s) { return s[0] <= 0 && s[1] < 0; },
       [half](const Vec& q) { return fixed_point(Vec{q[0], (q[0] - q[1]) * half}, Vec{(q[0] - q[1]) * half, 0}); },
       [](const Vec& q) { return Vec{0, q[1] - 2 * q[0]}; }},
      {"q1<=0, q2=2q1", [](const std::vector<int>& s) { return s[2] <= 0 && s[1] == 0; },
       [half](const Vec& q) {
         // u fixed, η ≥ 0 on the segment η1 + η2 = −q1/2.
         PolySet P(4);
         P.add_eq(unit(4, 0), q[0]);
         P.add_eq(unit(4, 1), -q[0] * half);
         P.add_le(-unit(4, 2), 0);
         P.add_le(-unit(4, 3), 0);
         P.add_eq(Vec{0, 0, 1, 1}, -q[0] * half);
         return P;
       },
       [](const Vec&) { return zeros(2); }},
      // ∇g̃₁(q,u) < 0 forces η₁ = 0 by complementarity.
      {"q1<=0, q2-2q1<0", [](const std::vector<int>& s) { return s[2] <= 0 && s[1] < 0; },
       [half](const Vec& q) { return fixed_point(Vec{q[0], -q[0] * half}, Vec{0, -q[0] * half}); },
       [](const Vec& q) { return Vec{q[1] - 2 * q[0], 0}; }},
  };
}

// {(u, η) : (q, u, η) ∈ piece} for fixed q.
PolySet fiber(const HCone& lifted, const Vec& q) {
  PolySet P(lifted.dim - q.size());
  for (std::size_t i = 0; i < lifted.rows.size(); ++i) {
    const Vec& a = lifted.rows[i];
    const Vec head = slice(a, 0, q.size());
    const Vec tail = slice(a, q.size(), a.size() - q.size());
    if (lifted.eq.contains(i)) {
      P.add_eq(tail, -dot(head, q));
    } else {
      P.add_le(tail, -dot(head, q));
    }
  }
  return P;
}

void table_at(Log& log, const VarSystem& ex, const std::vector<DirectionPiece>& pieces, const Cell& cell,
              const Vec& q) {
  const RatMatrix J = gtilde_jacobian(ex, ex.pbar, ex.xbar);
  std::ostringstream where;
  where << "q=(" << q[0].str() << "," << q[1].str() << ")";

  std::vector<PolySet> fibers;
  for (const auto& pc : pieces) {
    PolySet F = fiber(pc.lifted_eta, q);
    if (!F.empty()) fibers.push_back(std::move(F));
  }
  std::vector<const TableRow*> rows;
  static const std::vector<TableRow> table = direction_table();
  for (const auto& r : table) {
    if (r.applies(cell.signs)) rows.push_back(&r);
  }
  log.expect(rows.empty() == fibers.empty(), "table and pieces disagree on admissibility at " + where.str());
  for (const auto* r : rows) {
    const PolySet want = r->u_eta(q);
    const bool covered =
        std::any_of(fibers.begin(), fibers.end(), [&](const PolySet& F) { return contains(F, want); });
    log.expect(covered, "row '" + r->name + "' not reproduced at " + where.str());
    const Vec u = slice(*want.some_point(), 0, 2);
    log.expect(J * concat(q, u) == r->image(q), "image of row '" + r->name + "' differs at " + where.str());
  }
  for (const auto& F : fibers) {
    const bool explained = std::any_of(rows.begin(), rows.end(), [&](const TableRow* r) {
      return contains(r->u_eta(q), F);
    });
    log.expect(explained, "piece outside every table row at " + where.str());
  }
}

void example6(Log& log) {
  const VarSystem ex = fixture("ex_relaubin.json");
  const auto pieces = stationary_pieces(ex);
  for (const auto& pc : pieces) log.expect(is_zero(pc.lambda), "nonzero multiplier in a direction piece");

  const auto st = stratify_directions(HCone::whole(2), {from_ints({-1, 1}), from_ints({-2, 1}), from_ints({1, 0})});
  log.expect(st.cells.size() == 13, "q-plane arrangement does not have 13 cells");
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<long> coef(1, 5);
  for (const auto& cell : st.cells) {
    // The representative plus random points of the same relatively open cell.
    std::vector<Vec> qs{cell.rep, 3 * cell.rep};
    const VCone gen = generators(cell.closure);
    for (int k = 0; k < 6; ++k) {
      Vec q = cell.rep;
      for (const auto& r : gen.rays) q = q + Rational(coef(rng), 7) * r;
      for (const auto& l : gen.lines) q = q + Rational(coef(rng) - 3, 7) * l;
      const auto at = st.locate(q);
      if (at && st.cells[*at].signs == cell.signs) qs.push_back(q);
    }
    for (const auto& q : qs) table_at(log, ex, pieces, cell, q);
  }

  // Second condition breaks down exactly on the two boundary rays of dom S.
  const HCone dom = cone2({from_ints({-1, 1}), from_ints({-2, 1})});
  const Vec diag = from_ints({1, 1}), steep = from_ints({-1, -2});
  bool seen_diag = false, seen_steep = false;
  for (const auto& f : aubin_condition_failures(ex, dom)) {
    log.expect(f.q_rays.lines.empty(), "failure region contains a line");
    for (const auto& r : f.q_rays.rays) {
      const bool d = parallel(r, diag), s = parallel(r, steep);
      log.expect(d || s, "failure ray off the exclusion rays");
      seen_diag = seen_diag || d;
      seen_steep = seen_steep || s;
    }
  }
  log.expect(seen_diag && seen_steep, "an exclusion ray is missing from the failures");

  auto ray_cone = [](const Vec& r) {
    VCone v(2);
    v.add_ray(r);
    return hrep(v);
  };
  log.expect(check_rel_aubin(ex, ray_cone(diag)).status == Status::Fails, "ray (t,t) not FAILS");
  log.expect(check_rel_aubin(ex, ray_cone(steep)).status == Status::Fails, "ray (-t,-2t) not FAILS");
  log.expect(check_rel_aubin(ex, dom).status == Status::Fails, "whole dom cone not FAILS");
  log.expect(check_rel_aubin(ex).status == Status::Fails, "fixture tangent cone not FAILS");

  // Subcones of dom S generated by interior rays, and {0}.
  const std::vector<Vec> interior{from_ints({1, 0}), from_ints({2, 1}), from_ints({0, -1}),
                                  from_ints({-1, -3}), from_ints({1, -5}), from_ints({5, 4})};
  log.expect(check_rel_aubin(ex, HCone::zero(2)).status == Status::Holds, "T_P = {0} not HOLDS");
  for (std::size_t i = 0; i < interior.size(); ++i) {
    log.expect(dom.member(interior[i]) && !parallel(interior[i], diag) && !parallel(interior[i], steep),
               "bad interior ray");
    for (std::size_t j = i; j < interior.size(); ++j) {
      VCone v(2);
      v.add_ray(interior[i]);
      v.add_ray(interior[j]);
      // Skip generator pairs whose hull crosses a boundary ray of dom S.
      if (!contains(dom, v)) continue;
      const Verdict r = check_rel_aubin(ex, hrep(v));
      log.expect(r.status == Status::Holds, "subcone " + std::to_string(i) + "," + std::to_string(j) + " not HOLDS");
      // Adding a boundary ray breaks it.
      VCone w = v;
      w.add_ray(diag);
      if (contains(dom, w)) {
        log.expect(check_rel_aubin(ex, hrep(w)).status == Status::Fails,
                   "subcone with (t,t) not FAILS");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Six-inequality example.

void six_ineq(Log& log) {
  const VarSystem six = fixture("ex_nondegen6.json");
  const RatMatrix J = gtilde_jacobian(six, six.pbar, six.xbar);
  const Verdict v0 = check_nondegen_dir(six, zeros(4));
  log.expect(v0.status == Status::Fails, "v = 0 not FAILS");
  const Vec* mu = v0.certificate.vec("mu");
  log.expect(mu && !is_zero(*mu) && is_zero(J.transpose() * *mu), "no nonzero kernel multiplier at v = 0");

  std::vector<Vec> rows;
  for (std::size_t i = 0; i < J.rows(); ++i) rows.push_back(J.row(i));
  const auto st = stratify_directions(HCone::whole(4), rows);
  std::size_t nonzero = 0;
  for (const auto& cell : st.cells) {
    if (cell.is_zero()) continue;
    ++nonzero;
    const Verdict v = check_nondegen_dir(six, cell.rep);
    log.expect(v.status == Status::Holds, "cell with signs of rep not HOLDS");
  }
  log.expect(nonzero > 0, "no nonzero cells");
  // Every sampled nonzero v lies in some cell.
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int k = 0; k < 200; ++k) {
    Vec v(4);
    for (auto& x : v) x = d(rng);
    if (is_zero(v)) continue;
    const auto at = st.locate(v);
    log.expect(at.has_value() && !st.cells[*at].is_zero(), "direction outside the stratification");
  }
}

// ---------------------------------------------------------------------------
// 4. Oracle.

std::vector<Vec> closed_form(const Vec& p) {
  const Rational p1 = p[0], p2 = p[1];
  std::vector<Vec> out;
  if (p2 - p1 <= 0 && p1 >= 0) {
    out = {Vec{p1, 0}, Vec{p1, (p1 - p2) / 2}};
  } else if (p2 - 2 * p1 <= 0 && p1 < 0) {
    out = {Vec{p1, -p1 / 2}, Vec{p1, (p1 - p2) / 2}};
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void oracle(Log& log) {
  const VarSystem ex = fixture("ex_socic.json");
  std::size_t count = 0;
  std::array<std::size_t, 4> cases{};  // first branch, second branch, empty, coinciding points
  for (int a = -12; a <= 12; ++a) {
    for (int c = -12; c <= 12; ++c) {
      const Vec p{Rational(a, 4), Rational(c, 3)};
      const SolutionPieces S = solve_solution_map(ex, p);
      std::vector<Vec> pts = S.points();
      std::sort(pts.begin(), pts.end());
      const auto want = closed_form(p);
      log.expect(S.finite() && pts == want, "solution set differs from the closed form");
      if (p[1] - p[0] <= 0 && p[0] >= 0) {
        ++cases[0];
      } else if (p[1] - 2 * p[0] <= 0 && p[0] < 0) {
        ++cases[1];
      } else {
        ++cases[2];
      }
      if (want.size() == 1) ++cases[3];
      ++count;
    }
  }
  log.expect(count >= 100, "grid smaller than 100 points");
  for (auto c : cases) log.expect(c > 0, "a formula case is not covered by the grid");

  std::vector<Vec> feasible;
  for (int a = -6; a <= 6; ++a) {
    for (int c = -6; c <= 6; ++c) {
      const Vec p{Rational(a, 6), Rational(c, 6)};
      if (p[1] - p[0] <= 0 && p[1] - 2 * p[0] <= 0) feasible.push_back(p);
    }
  }
  const CalmnessReport calm = sample_calmness(ex, feasible);
  log.expect(calm.reference_isolated, "reference solution not isolated");
  log.expect(!calm.table.unbounded() && calm.table.max_sq() <= 2, "calmness ratio above the bound 2 (squared)");

  // Grids straddling each exclusion ray: S jumps to empty across it.
  for (const Vec& ray : {from_ints({1, 1}), from_ints({-1, -2})}) {
    std::vector<Vec> grid;
    for (int k = 1; k <= 4; ++k) {
      const Vec p = Rational(k, 4) * ray;
      grid.push_back(p + Vec{0, Rational(-1, 16)});
      grid.push_back(p + Vec{0, Rational(1, 16)});
    }
    const RatioTable t = sample_aubin(ex, grid, std::nullopt);
    log.expect(t.unbounded(), "no branch separation across a ray");
  }
}

// ---------------------------------------------------------------------------
// 5. Property suites.

void properties(Log& log) {
  for (const auto& o : propsuite::run_all(kSeed, kCases)) {
    log.expect(o.cases >= kCases && o.ok(), o.name + ": " + std::to_string(o.failures) + " failures; " +
                                                o.first_failure);
  }
}

// ---------------------------------------------------------------------------
// 6. Invariance.

// Constraint rows rescaled by positive factors and permuted, together with
// the matching permutation of the components of g.
VarSystem transformed(const VarSystem& sys, const std::vector<std::size_t>& perm, const Vec& scale) {
  VarSystem out = sys;
  const std::size_t s = sys.s;
  for (std::size_t k = 0; k < s; ++k) out.g.comp(k) = sys.g.comp(perm[k]);
  PolySet D(s);
  auto permute_cols = [&](const Vec& a) {
    Vec b(s);
    for (std::size_t k = 0; k < s; ++k) b[k] = a[perm[k]];
    return b;
  };
  std::vector<std::size_t> order(sys.D.A.size());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const Rational c = scale[r % scale.size()];
    D.add_le(c * permute_cols(sys.D.A[order[r]]), c * sys.D.d[order[r]]);
  }
  for (std::size_t r = 0; r < sys.D.E.size(); ++r) D.add_eq(permute_cols(sys.D.E[r]), sys.D.c[r]);
  out.D = D;
  if (sys.TP) {
    HCone T(sys.TP->dim);
    for (std::size_t r = sys.TP->rows.size(); r-- > 0;) {
      const Rational c = scale[r % scale.size()];
      if (sys.TP->eq.contains(r)) {
        T.add_eq(c * sys.TP->rows[r]);
      } else {
        T.add_ineq(c * sys.TP->rows[r]);
      }
    }
    out.TP = T;
  }
  out.validate();
  return out;
}

// Statuses as strings; a rejected input is recorded as such.
std::vector<std::string> verdicts(const VarSystem& sys, const std::vector<Vec>& dirs, const Rational& t) {
  std::vector<std::string> out;
  auto guarded = [&](auto&& fn) {
    try {
      out.push_back(to_string(fn().status));
    } catch (const std::invalid_argument&) {
      out.push_back("rejected");
    }
  };
  guarded([&] { return check_robinson_cq(sys); });
  guarded([&] { return check_assumption1(sys); });
  guarded([&] { return check_socic(sys); });
  guarded([&] { return check_isolated_calmness(sys); });
  guarded([&] { return check_metreg_M_dir(sys, zeros(sys.l + sys.n)); });
  guarded([&] { return check_rel_aubin(sys); });
  for (const auto& v : dirs) {
    const Vec tv = t * v;
    guarded([&] { return check_nondegen_dir(sys, tv); });
    guarded([&] { return check_metreg_M_dir(sys, tv); });
    guarded([&] { return check_socic_dir(sys, slice(tv, sys.l, sys.n)); });
  }
  return out;
}

void invariance(Log& log) {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<long> d(-2, 2);
  std::uniform_int_distribution<long> pos(1, 9);
  for (const char* name : {"ex_socic.json", "ex_relaubin.json", "ex_nondegen6.json"}) {
    const VarSystem sys = fixture(name);
    std::vector<Vec> dirs;
    for (int k = 0; k < 6; ++k) {
      Vec v(sys.l + sys.n);
      for (auto& x : v) x = d(rng);
      dirs.push_back(v);
    }
    const auto base = verdicts(sys, dirs, 1);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::size_t> perm(sys.s);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Vec scale(4);
      for (auto& c : scale) c = Rational(pos(rng), pos(rng));
      const Rational t(pos(rng), pos(rng));
      log.expect(verdicts(transformed(sys, perm, scale), dirs, t) == base,
                 std::string(name) + ": verdicts changed under trial " + std::to_string(trial));
    }
  }
}

struct Criterion {
  std::string title;
  double limit_s;
  std::function<void(Log&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1 second-order example: RCQ, SOCIC with v=(-u1,0), isolated calmness, metric regularity", kLimitExample5,
       example5},
      {"2 relative Aubin example: direction table and exclusion rays", kLimitExample6, example6},
      {"3 six-inequality example: degenerate at 0, non-degenerate on every nonzero cell", kLimitSixIneq, six_ineq},
      {"4 oracle: closed-form solution map, bounded calmness, branch separation", kLimitOracle, oracle},
      {"5 randomized property suites (200 cases each)", kLimitProperties, properties},
      {"6 invariance under row rescaling, permutation and direction scaling", kLimitInvariance, invariance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Log log;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(log);
    } catch (const std::exception& e) {
      log.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) {
      log.problems.push_back("runtime " + std::to_string(secs) + " s over limit " + std::to_string(c.limit_s) + " s");
    }
    const bool ok = log.problems.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.title << " (" << log.checks << " checks, " << secs << " s)\n";
    for (std::size_t i = 0; i < log.problems.size() && i < 10; ++i) std::cout << "       " << log.problems[i] << "\n";
  }
  return failed == 0 ? 0 : 1;
}
