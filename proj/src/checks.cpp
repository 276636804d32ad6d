#include "varstab/checks.hpp"

#include <functional>
#include <stdexcept>

#include "varstab/io.hpp"

namespace varstab {

namespace {

std::vector<std::size_t> iota(std::size_t begin, std::size_t count) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(begin + i);
  return v;
}

std::vector<Vec> rows_of(const HCone& K, IndexSet J) {
  std::vector<Vec> out;
  for (auto i : J.elements()) out.push_back(K.rows[i]);
  return out;
}

/// A point of C that is nonzero on one of `coords`, found by bounded LPs.
std::optional<Vec> nonzero_on(const HCone& C, const std::vector<std::size_t>& coords) {
  for (auto j : coords) {
    for (int sgn : {1, -1}) {
      LinProgram lp(C.dim);
      embed(lp, C, 0);
      const Vec e = Rational(sgn) * unit(C.dim, j);
      lp.add_le(e, Rational(1));
      lp.set_objective(e);
      const LpResult r = lp_solve(lp, Sense::Max);
      if (r.optimal() && r.value.sign() > 0) return r.point;
    }
  }
  return std::nullopt;
}

/// ker(jacᵀ) ∩ span(rows) = {0}
bool kernel_trivial_on(const RatMatrix& jac, const std::vector<Vec>& rows) {
  if (rows.empty()) return true;
  const RatMatrix jt = jac.transpose();
  std::vector<Vec> images;
  for (const auto& a : rows) images.push_back(jt * a);
  return rank(jac.cols(), images) == rank(jac.rows(), rows);
}

/// A nonzero μ ∈ span(rows) with jacᵀμ = 0.
std::optional<Vec> kernel_witness(const RatMatrix& jac, const std::vector<Vec>& rows) {
  if (rows.empty()) return std::nullopt;
  const RatMatrix jt = jac.transpose();
  RatMatrix M(jac.cols(), rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const Vec img = jt * rows[t];
    for (std::size_t j = 0; j < jac.cols(); ++j) M(j, t) = img[j];
  }
  for (const auto& sigma : kernel_basis(M)) {
    Vec mu = zeros(jac.rows());
    for (std::size_t t = 0; t < rows.size(); ++t) mu = mu + sigma[t] * rows[t];
    if (!is_zero(mu)) return primitive(mu);
  }
  return std::nullopt;
}

/// c > 0 with primitive(raw) = c·raw.
Rational primitive_factor(const Vec& raw) {
  const Vec p = primitive(raw);
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j].sign() != 0) return p[j] / raw[j];
  }
  return Rational(1);
}

Vec combine(const std::vector<Vec>& rows, const Vec& coeffs, std::size_t dim) {
  Vec out = zeros(dim);
  for (std::size_t t = 0; t < rows.size(); ++t) out = out + coeffs[t] * rows[t];
  return out;
}

Verdict downgrade_without_a1(Verdict v, const Verdict& a1) {
  if (a1.status != Status::Holds && v.status != Status::Inconclusive) {
    v.certificate.note("downgraded", "raw status " + to_string(v.status) + "; Assumption 1 not certified");
    v.status = Status::Inconclusive;
    v.reason = "Assumption 1 not certified";
  }
  v.prerequisites.insert(v.prerequisites.begin(), a1);
  return v;
}

struct RefData {
  Vec px, z;
  RatMatrix Jg, J2, Jf, H2, b, bt;
  HCone T;
};

RefData ref_data(const VarSystem& sys) {
  RefData r;
  r.px = sys.px();
  r.z = derive_gtilde(sys).eval(r.px);
  r.Jg = gtilde_jacobian(sys, sys.pbar, sys.xbar);
  r.J2 = x_block(sys, r.Jg);
  r.Jf = sys.f.jacobian(r.px);
  r.H2 = x_block(sys, r.Jf);
  r.b = derive_b_at(sys, sys.pbar, sys.xbar);
  r.bt = r.b.transpose();
  r.T = tangent_cone(sys.D, r.z);
  return r;
}

/// v with b v ∈ T_K(w) and vᵀh < 0, normalized to vᵀh = −1.
std::optional<Vec> descent_witness(const RatMatrix& bt, const HCone& K, const Vec& w, const Vec& h) {
  const HCone TK = tangent_at(K, w);
  LinProgram lp(h.size());
  for (std::size_t i = 0; i < TK.rows.size(); ++i) {
    Vec row = bt * TK.rows[i];
    if (TK.eq.contains(i)) {
      lp.add_eq(std::move(row), Rational(0));
    } else {
      lp.add_le(std::move(row), Rational(0));
    }
  }
  lp.add_ge(h, Rational(-1));
  lp.set_objective(h);
  const LpResult r = lp_solve(lp, Sense::Min);
  if (!r.optimal() || r.value.sign() >= 0) return std::nullopt;
  return r.point;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stratification

std::optional<std::size_t> Stratification::locate(const Vec& v) const {
  if (!base.member(v)) return std::nullopt;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < hyperplanes.size(); ++i) ok = dot(hyperplanes[i], v).sign() == cells[c].signs[i];
    for (std::size_t i = 0; ok && i < base.rows.size(); ++i) ok = dot(base.rows[i], v).sign() == cells[c].base_signs[i];
    if (ok) return c;
  }
  return std::nullopt;
}

Stratification stratify_directions(const HCone& base, const std::vector<Vec>& hyperplanes) {
  Stratification st;
  st.base = canonicalize(base);
  st.hyperplanes = hyperplanes;
  const std::size_t d = st.base.dim;
  const std::size_t nb = st.base.rows.size();
  std::vector<Vec> all = st.base.rows;
  all.insert(all.end(), hyperplanes.begin(), hyperplanes.end());

  std::vector<int> signs(all.size(), 0);
  auto system = [&](std::size_t upto) {
    LinProgram lp(d);
    for (std::size_t i = 0; i < upto; ++i) {
      if (signs[i] == 0) {
        lp.add_eq(all[i], Rational(0));
      } else if (signs[i] < 0) {
        lp.add_lt(all[i], Rational(0));
      } else {
        lp.add_gt(all[i], Rational(0));
      }
    }
    return lp;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == all.size()) {
      auto rep = strict_feasible_point(system(all.size()));
      if (!rep) return;
      Cell cell;
      cell.base_signs.assign(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(nb));
      cell.signs.assign(signs.begin() + static_cast<std::ptrdiff_t>(nb), signs.end());
      cell.closure = HCone(d);
      bool all_zero = true;
      for (std::size_t k = 0; k < all.size(); ++k) {
        if (signs[k] == 0) {
          cell.closure.add_eq(all[k]);
        } else {
          all_zero = false;
          cell.closure.add_ineq(signs[k] < 0 ? all[k] : -all[k]);
        }
      }
      cell.closure = canonicalize(cell.closure);
      if (all_zero) {
        const auto ker = kernel_basis(RatMatrix::from_rows(d, all));
        if (!ker.empty()) rep = primitive(ker.front());
      } else {
        rep = primitive(*rep);
      }
      cell.rep = *rep;
      cell.is_zero_vec = is_zero(cell.rep);
      st.cells.push_back(std::move(cell));
      return;
    }
    std::vector<int> options;
    if (i < nb) {
      options = st.base.eq.contains(i) ? std::vector<int>{0} : std::vector<int>{-1, 0};
    } else {
      options = {-1, 0, 1};
    }
    for (int sgn : options) {
      signs[i] = sgn;
      if (strict_feasible_point(system(i + 1))) rec(i + 1);
    }
    signs[i] = 0;
  };
  rec(0);
  return st;
}

// ---------------------------------------------------------------------------
// Constraint qualifications

Verdict check_robinson_cq(const VarSystem& sys) {
  Verdict v;
  v.condition = "robinson-cq";
  const Vec y = sys.ybar();
  const Vec z = sys.g.eval(y);
  HCone N = normal_cone_hrep(sys.D, z);
  const RatMatrix J = sys.g.jacobian(y);
  for (std::size_t j = 0; j < sys.n; ++j) N.add_eq(J.col(sys.l + sys.n + j));
  if (auto mu = nonzero_element(N)) {
    v.status = Status::Fails;
    v.reason = "nonzero normal multiplier annihilated by the z-Jacobian";
    v.certificate.set("mu", primitive(*mu));
  } else {
    v.status = Status::Holds;
    v.reason = "only the zero multiplier is annihilated";
  }
  return v;
}

Verdict check_assumption1(const VarSystem& sys) {
  Verdict rcq = check_robinson_cq(sys);
  Verdict v;
  v.condition = "assumption1";
  if (rcq.status == Status::Holds) {
    v.status = Status::Holds;
    v.reason = "implied by Robinson's constraint qualification";
  } else {
    v.status = Status::Inconclusive;
    v.reason = "Robinson's constraint qualification fails; the weaker assumption is not decided";
  }
  v.prerequisites.push_back(std::move(rcq));
  return v;
}

// ---------------------------------------------------------------------------
// Directional non-degeneracy

Verdict check_nondegen_dir(const RatMatrix& jac, const PolySet& D, const Vec& zref, const Vec& image_dir) {
  if (jac.rows() != D.dim || image_dir.size() != D.dim) throw std::invalid_argument("dimension mismatch");
  Verdict v;
  v.condition = "nondegeneracy";
  const HCone T = tangent_cone(D, zref);
  if (!T.member(image_dir)) {
    v.status = Status::Holds;
    v.reason = "direction image leaves the tangent cone (vacuous)";
    return v;
  }
  const IndexSet J = T.active(image_dir);
  const auto A = rows_of(T, J);
  const bool dual = kernel_trivial_on(jac, A);
  std::vector<Vec> gens;
  for (std::size_t j = 0; j < jac.cols(); ++j) gens.push_back(jac.col(j));
  for (auto& k : kernel_basis(RatMatrix::from_rows(D.dim, A))) gens.push_back(std::move(k));
  if (A.empty()) {
    for (std::size_t i = 0; i < D.dim; ++i) gens.push_back(unit(D.dim, i));
  }
  const bool primal = rank(D.dim, gens) == D.dim;
  if (dual != primal) throw std::logic_error("dual and primal non-degeneracy tests disagree");
  v.certificate.set_face("J(v)", J);
  if (dual) {
    v.status = Status::Holds;
    v.reason = "no nonzero multiplier in the span of the active normals is annihilated";
  } else {
    v.status = Status::Fails;
    v.reason = "kernel multiplier in the span of the active normals";
    v.certificate.set("mu", *kernel_witness(jac, A));
  }
  return v;
}

Verdict check_nondegen_dir(const VarSystem& sys, const Vec& v) {
  if (v.size() != sys.l + sys.n) throw std::invalid_argument("direction has wrong dimension");
  const RefData r = ref_data(sys);
  Verdict out = check_nondegen_dir(r.Jg, sys.D, r.z, r.Jg * v);
  out.certificate.set("v", v);
  return out;
}

Verdict check_F_dirmetreg(const VarSystem& sys, const Vec& v, const Vec& lambda, const Vec& eta) {
  if (!theta_member(sys, v, lambda, eta)) throw std::invalid_argument("(lambda, eta) is not in Theta");
  const RefData r = ref_data(sys);
  Verdict single = check_nondegen_dir(r.Jg, sys.D, r.z, r.Jg * v);
  const HCone K = critical_cone(sys.D, r.z, lambda);
  const Vec w = r.Jg * v;
  const IndexSet act = K.active(w);
  bool all_ok = true;
  std::size_t checked = 0;
  for (const auto& F : faces(K)) {
    if (!F.J.subset_of(act)) continue;
    const auto A = rows_of(K, F.J);
    if (!in_span(A, eta)) continue;
    ++checked;
    all_ok = all_ok && kernel_trivial_on(r.Jg, A);
  }
  if (all_ok != (single.status == Status::Holds)) {
    throw std::logic_error("single-face and all-faces regularity tests disagree");
  }
  Verdict out;
  out.condition = "F-directional-regularity";
  out.status = single.status;
  out.reason = all_ok ? "kernel condition holds on every admissible face" : "kernel condition fails on the face of v";
  out.certificate = single.certificate;
  out.certificate.note("faces-checked", std::to_string(checked));
  return out;
}

// ---------------------------------------------------------------------------
// Second-order condition for isolated calmness

Verdict check_socic_dir(const VarSystem& sys, const Vec& u) {
  if (u.size() != sys.n) throw std::invalid_argument("direction u has wrong dimension");
  if (is_zero(u)) throw std::invalid_argument("direction u must be nonzero");
  const Verdict a1 = check_assumption1(sys);
  const RefData r = ref_data(sys);
  const Vec qu = concat(zeros(sys.l), u);
  const Vec w = r.Jg * qu;
  const HCone N = normal_cone_hrep(sys.D, r.z);
  const auto parts = bterm_parts(sys);
  std::vector<Vec> curv;  // column k: x-block of M_k applied to u
  for (const auto& Mk : parts) curv.push_back(x_block(sys, Mk) * u);
  const Vec h0 = r.H2 * u;

  Verdict v;
  v.condition = "socic";
  v.certificate.set("u", u);
  const auto strata = multiplier_LambdaTilde(sys, r.px, default_xstar(sys), qu);
  bool failed = false;
  for (std::size_t si = 0; si < strata.size(); ++si) {
    const auto& st = strata[si];
    StratumReport rep;
    rep.label = "multiplier stratum " + std::to_string(si) + " face " + st.face.J.str();
    const VCone NK = normal_at(st.critical, w);
    const std::size_t s = sys.s, nr = NK.rays.size(), nl = NK.lines.size(), total = s + nr + nl;
    LinProgram lp(total);
    embed(lp, st.closure, 0);
    for (std::size_t i = 0; i < N.rows.size(); ++i) {
      if (!st.face.J.contains(i)) lp.add_lt(pad(N.rows[i], 0, total), Rational(0));
    }
    for (std::size_t t = 0; t < nr; ++t) lp.add_lower(s + t, Rational(0));
    for (std::size_t j = 0; j < sys.n; ++j) {
      Vec row = zeros(total);
      for (std::size_t k = 0; k < s; ++k) row[k] = curv[k][j];
      for (std::size_t t = 0; t < nr; ++t) row[s + t] = (r.bt * NK.rays[t])[j];
      for (std::size_t t = 0; t < nl; ++t) row[s + nr + t] = (r.bt * NK.lines[t])[j];
      lp.add_eq(std::move(row), -h0[j]);
    }
    if (auto pt = strict_feasible_point(lp)) {
      const Vec lam = slice(*pt, 0, s);
      Vec eta = combine(NK.rays, slice(*pt, s, nr), s) + combine(NK.lines, slice(*pt, s + nr, nl), s);
      rep.status = Status::Fails;
      rep.data.set("lambda", lam);
      rep.data.set("eta", eta);
      if (!failed) {
        v.certificate.set("lambda", lam);
        v.certificate.set("eta", eta);
        v.certificate.set_face("multiplier-face", st.face.J);
      }
      failed = true;
    } else {
      Vec h = h0;
      for (std::size_t k = 0; k < s; ++k) h = h + st.rep[k] * curv[k];
      auto wit = descent_witness(r.bt, st.critical, w, h);
      if (!wit) throw std::logic_error("descent witness missing for a passing stratum");
      rep.status = Status::Holds;
      rep.data.set("lambda", st.rep);
      rep.data.set("v", *wit);
    }
    v.strata.push_back(std::move(rep));
  }
  if (failed) {
    v.status = Status::Fails;
    v.reason = "stationary multiplier direction without a descent witness";
  } else {
    v.status = Status::Holds;
    v.reason = strata.empty() ? "no admissible multiplier (vacuous)" : "descent witness on every multiplier stratum";
  }
  return downgrade_without_a1(std::move(v), a1);
}

Verdict check_socic(const VarSystem& sys) {
  const Verdict a1 = check_assumption1(sys);
  Verdict v;
  v.condition = "socic";
  if (!sys.g.is_affine()) {
    v.status = Status::Inconclusive;
    v.reason = "quadratic g: the global check is not exact; use the per-direction check (--direction u)";
    v.prerequisites.push_back(a1);
    return v;
  }
  const RefData r = ref_data(sys);
  const auto strata = stratify_multipliers(sys.D, r.z, multiplier_Xi(sys, r.px, default_xstar(sys)).set);
  const RatMatrix J2t = r.J2.transpose();

  bool failed = false;
  for (std::size_t si = 0; si < strata.size(); ++si) {
    const HCone& K = strata[si].critical;
    for (const auto& F : faces(K)) {
      const auto idx = F.J.elements();
      const std::size_t k = idx.size(), N = sys.n + k;
      HCone C(N);
      for (std::size_t i = 0; i < K.rows.size(); ++i) {
        Vec row = pad(J2t * K.rows[i], 0, N);
        if (F.J.contains(i)) {
          C.add_eq(std::move(row));
        } else {
          C.add_ineq(std::move(row));
        }
      }
      for (std::size_t j = 0; j < sys.n; ++j) {
        Vec row = pad(r.H2.row(j), 0, N);
        for (std::size_t t = 0; t < k; ++t) row[sys.n + t] = (r.bt * K.rows[idx[t]])[j];
        C.add_eq(std::move(row));
      }
      for (std::size_t t = 0; t < k; ++t) {
        if (!K.eq.contains(idx[t])) C.add_ineq(-unit(N, sys.n + t));
      }
      auto pt = nonzero_on(C, iota(0, sys.n));
      if (!pt) continue;
      const Rational scale = primitive_factor(slice(*pt, 0, sys.n));
      const Vec u = scale * slice(*pt, 0, sys.n);
      const Vec eta = scale * combine(rows_of(K, F.J), slice(*pt, sys.n, k), sys.s);
      StratumReport rep;
      rep.label = "multiplier stratum " + std::to_string(si) + ", critical face " + F.J.str();
      rep.status = Status::Fails;
      rep.data.set("u", u);
      rep.data.set("lambda", strata[si].rep);
      rep.data.set("eta", eta);
      if (!failed) {
        v.certificate.set("u", u);
        v.certificate.set("lambda", strata[si].rep);
        v.certificate.set("eta", eta);
        v.certificate.set_face("critical-face", F.J);
      }
      failed = true;
      v.strata.push_back(std::move(rep));
    }
  }
  if (failed) {
    v.status = Status::Fails;
    v.reason = "nonzero u solving the stationary inclusion";
    return downgrade_without_a1(std::move(v), a1);
  }

  // Descent witnesses on every cell of u-space.
  std::vector<Vec> hyper;
  for (const auto& a : r.T.rows) hyper.push_back(J2t * a);
  const Stratification cells = stratify_directions(HCone::whole(sys.n), hyper);
  for (std::size_t c = 0; c < cells.cells.size(); ++c) {
    const Cell& cell = cells.cells[c];
    if (cell.is_zero()) continue;
    const Vec w = r.J2 * cell.rep;
    if (!r.T.member(w)) continue;
    for (std::size_t si = 0; si < strata.size(); ++si) {
      if (!strata[si].critical.member(w)) continue;
      auto wit = descent_witness(r.bt, strata[si].critical, w, r.H2 * cell.rep);
      if (!wit) throw std::logic_error("descent witness missing on an admissible cell");
      StratumReport rep;
      rep.label = "u-cell " + std::to_string(c) + ", multiplier stratum " + std::to_string(si);
      rep.status = Status::Holds;
      rep.data.set("u", cell.rep);
      rep.data.set("lambda", strata[si].rep);
      rep.data.set("v", *wit);
      v.strata.push_back(std::move(rep));
    }
  }
  v.status = Status::Holds;
  v.reason = "no nonzero u solves the stationary inclusion; descent witnesses per u-cell";
  return downgrade_without_a1(std::move(v), a1);
}

// ---------------------------------------------------------------------------
// Directional metric regularity of M

Verdict check_metreg_M_dir(const VarSystem& sys, const Vec& qu) {
  if (qu.size() != sys.l + sys.n) throw std::invalid_argument("direction (q,u) has wrong dimension");
  Verdict v;
  v.condition = "metric-regularity";
  v.certificate.set("direction", qu);
  Verdict nd = check_nondegen_dir(sys, qu);
  if (nd.status != Status::Holds) {
    v.status = Status::Inconclusive;
    v.reason = "non-degeneracy in the direction is not certified";
    v.prerequisites.push_back(std::move(nd));
    return v;
  }
  const RefData r = ref_data(sys);
  const Vec w = r.Jg * qu;
  const RatMatrix Jgt = r.Jg.transpose();
  const auto strata = stratify_multipliers(sys.D, r.z, multiplier_Xi_dir(sys, r.px, default_xstar(sys), qu).set);
  const auto parts = bterm_parts(sys);
  bool curved = false;
  for (const auto& Mk : parts) curved = curved || !(Mk == RatMatrix(Mk.rows(), Mk.cols()));

  bool failed = false, undecided = false;
  std::size_t pairs_checked = 0;
  for (std::size_t si = 0; si < strata.size() && !failed; ++si) {
    const auto& st = strata[si];
    if (curved && !singleton_point(st.closure)) {
      undecided = true;
      StratumReport rep;
      rep.label = "multiplier stratum " + std::to_string(si) + " face " + st.face.J.str();
      rep.status = Status::Inconclusive;
      rep.data.note("reason", "gradient of the Lagrangian varies over a non-singleton stratum");
      v.strata.push_back(std::move(rep));
      continue;
    }
    const Vec lam = st.rep;
    const HCone& K = st.critical;
    const RatMatrix L = lagrangian_grad(sys, lam, sys.pbar, sys.xbar);
    const RatMatrix Lt = L.transpose();
    const Vec rhs = -(L * qu);
    for (const auto& fp : nested_face_pairs(K, w, std::nullopt)) {
      // η = Σ_{J_F1} σ_i a_i with bᵀη = −∇Lag(q,u).
      const auto idx1 = fp.F1.J.elements();
      LinProgram eta_lp(idx1.size());
      for (std::size_t t = 0; t < idx1.size(); ++t) {
        if (!K.eq.contains(idx1[t])) eta_lp.add_lower(t, Rational(0));
      }
      for (std::size_t j = 0; j < sys.n; ++j) {
        Vec row = zeros(idx1.size());
        for (std::size_t t = 0; t < idx1.size(); ++t) row[t] = (r.bt * K.rows[idx1[t]])[j];
        eta_lp.add_eq(std::move(row), rhs[j]);
      }
      auto sig = feasible_point(eta_lp);
      if (!sig) continue;
      ++pairs_checked;
      // w' ≠ 0 with b w' ∈ F1 − F2 and ∇Lagᵀw' ∈ ∇g̃ᵀ(F1 − F2)°.
      const auto& P = fp.diff_polar;
      const std::size_t nr = P.rays.size(), nl = P.lines.size(), N = sys.n + nr + nl;
      HCone C(N);
      for (std::size_t i = 0; i < fp.diff.rows.size(); ++i) {
        Vec row = pad(r.bt * fp.diff.rows[i], 0, N);
        if (fp.diff.eq.contains(i)) {
          C.add_eq(std::move(row));
        } else {
          C.add_ineq(std::move(row));
        }
      }
      for (std::size_t j = 0; j < sys.l + sys.n; ++j) {
        Vec row = pad(L.col(j), 0, N);
        for (std::size_t t = 0; t < nr; ++t) row[sys.n + t] = -(Jgt * P.rays[t])[j];
        for (std::size_t t = 0; t < nl; ++t) row[sys.n + nr + t] = -(Jgt * P.lines[t])[j];
        C.add_eq(std::move(row));
      }
      for (std::size_t t = 0; t < nr; ++t) C.add_ineq(-unit(N, sys.n + t));
      auto pt = nonzero_on(C, iota(0, sys.n));
      if (!pt) continue;
      failed = true;
      v.certificate.set("lambda", lam);
      v.certificate.set("eta", combine(rows_of(K, fp.F1.J), *sig, sys.s));
      v.certificate.set_face("F1", fp.F1.J);
      v.certificate.set_face("F2", fp.F2.J);
      v.certificate.set("w", primitive(slice(*pt, 0, sys.n)));
      break;
    }
  }
  v.certificate.note("face-pairs-checked", std::to_string(pairs_checked));
  v.prerequisites.push_back(std::move(nd));
  if (failed) {
    v.status = Status::Fails;
    v.reason = "face pair admits w without an ascent direction";
  } else if (undecided) {
    v.status = Status::Inconclusive;
    v.reason = "multiplier-dependent condition on a non-singleton stratum";
  } else {
    v.status = Status::Holds;
    v.reason = strata.empty() ? "no admissible multiplier (vacuous)" : "every admissible face pair passes";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Isolated calmness

Verdict check_isolated_calmness(const VarSystem& sys) {
  Verdict a1 = check_assumption1(sys);
  Verdict soc = check_socic(sys);
  Verdict v;
  v.condition = "isolated-calmness";
  if (soc.status == Status::Holds && a1.status == Status::Holds) {
    v.status = Status::Holds;
    v.reason = "second-order condition holds under Assumption 1";
    v.prerequisites = {std::move(a1), std::move(soc)};
    return v;
  }
  if (soc.status == Status::Fails) {
    std::vector<Vec> candidates;
    for (const auto& s : soc.strata) {
      if (const Vec* u = s.data.vec("u")) candidates.push_back(*u);
    }
    for (const auto& u : candidates) {
      const Vec qu = concat(zeros(sys.l), u);
      Verdict nd = check_nondegen_dir(sys, qu);
      if (nd.status != Status::Holds) continue;
      Verdict mr = check_metreg_M_dir(sys, qu);
      if (mr.status != Status::Holds) continue;
      v.status = Status::Disproved;
      v.reason = "stationary direction u with certified directional regularity";
      v.certificate.set("u", u);
      v.prerequisites = {std::move(soc), std::move(nd), std::move(mr)};
      return v;
    }
    v.status = Status::Inconclusive;
    v.reason = "second-order condition fails but the necessity prerequisites are not certified";
    if (!candidates.empty()) v.certificate.set("u", candidates.front());
    v.prerequisites = {std::move(soc)};
    return v;
  }
  v.status = Status::Inconclusive;
  v.reason = "second-order condition not certified";
  v.prerequisites = {std::move(a1), std::move(soc)};
  return v;
}

// ---------------------------------------------------------------------------
// Aubin property relative to P

std::vector<AubinFailure> aubin_condition_failures(const VarSystem& sys, const HCone& TP) {
  if (!sys.g.is_affine()) throw std::invalid_argument("the Aubin analysis is exact only for affine g");
  if (TP.dim != sys.l) throw std::invalid_argument("T_P has wrong dimension");
  const RefData r = ref_data(sys);
  const std::size_t m = sys.l + sys.n;
  const RatMatrix Jgt = r.Jg.transpose();
  const RatMatrix J2t = r.J2.transpose();
  const RatMatrix H2t = r.H2.transpose();
  const auto strata = stratify_multipliers(sys.D, r.z, multiplier_Xi(sys, r.px, default_xstar(sys)).set);

  // (q,u,σ) with ∇g̃(q,u) on the rows `eqrows` (= 0) and the other K rows (<= 0),
  // stationarity with η = Σ_{sig} σ_i a_i, and q ∈ T_P.
  auto lifted = [&](const HCone& K, IndexSet eqrows, const std::vector<std::size_t>& sig) {
    const std::size_t N = m + sig.size();
    HCone C(N);
    for (std::size_t i = 0; i < K.rows.size(); ++i) {
      Vec row = pad(Jgt * K.rows[i], 0, N);
      if (eqrows.contains(i)) {
        C.add_eq(std::move(row));
      } else {
        C.add_ineq(std::move(row));
      }
    }
    for (std::size_t j = 0; j < sys.n; ++j) {
      Vec row = pad(r.Jf.row(j), 0, N);
      for (std::size_t t = 0; t < sig.size(); ++t) row[m + t] = (r.bt * K.rows[sig[t]])[j];
      C.add_eq(std::move(row));
    }
    for (std::size_t t = 0; t < sig.size(); ++t) {
      if (!K.eq.contains(sig[t])) C.add_ineq(-unit(N, m + t));
    }
    for (std::size_t i = 0; i < TP.rows.size(); ++i) {
      Vec row = pad(TP.rows[i], 0, N);
      if (TP.eq.contains(i)) {
        C.add_eq(std::move(row));
      } else {
        C.add_ineq(std::move(row));
      }
    }
    return canonicalize(C);
  };

  auto finish = [&](AubinFailure& f, const Vec& pt, const HCone& K, const std::vector<std::size_t>& sig) {
    const Rational scale = primitive_factor(slice(pt, 0, m));
    const Vec qu = scale * slice(pt, 0, m);
    f.witness_q = slice(qu, 0, sys.l);
    f.witness_u = slice(qu, sys.l, sys.n);
    std::vector<Vec> A;
    for (auto i : sig) A.push_back(K.rows[i]);
    f.eta = scale * combine(A, slice(pt, m, sig.size()), sys.s);
    f.q_rays = sys.l == 0 ? VCone(0) : generators(image(f.lifted, selector(f.lifted.dim, iota(0, sys.l))));
  };

  std::vector<AubinFailure> out;
  for (std::size_t si = 0; si < strata.size(); ++si) {
    const HCone& K = strata[si].critical;
    const auto Kfaces = faces(K);
    // Partial non-degeneracy breaks on faces of T_D (= rows of K) whose normals
    // meet ker ∇₂g̃ᵀ.
    for (const auto& FT : faces(r.T)) {
      if (kernel_trivial_on(r.J2, rows_of(r.T, FT.J))) continue;
      for (const auto& F : Kfaces) {
        const auto sig = F.J.elements();
        AubinFailure f;
        f.kind = "nondegeneracy";
        f.stratum = si;
        f.lambda = strata[si].rep;
        f.pair = make_face_pair(K, F, F);
        f.lifted = lifted(K, F.J | FT.J, sig);
        auto pt = nonzero_on(f.lifted, iota(0, m));
        if (!pt) continue;
        f.witness_w = *kernel_witness(r.J2, rows_of(r.T, FT.J));
        finish(f, *pt, K, sig);
        out.push_back(std::move(f));
      }
    }
    for (const auto& F1 : Kfaces) {
      for (const auto& F2 : Kfaces) {
        if (!F1.J.subset_of(F2.J)) continue;
        const FacePair fp = make_face_pair(K, F1, F2);
        const auto& P = fp.diff_polar;
        const std::size_t nr = P.rays.size(), nl = P.lines.size(), N = sys.n + nr + nl;
        HCone C(N);
        for (std::size_t i = 0; i < fp.diff.rows.size(); ++i) {
          Vec row = pad(r.bt * fp.diff.rows[i], 0, N);
          if (fp.diff.eq.contains(i)) {
            C.add_eq(std::move(row));
          } else {
            C.add_ineq(std::move(row));
          }
        }
        for (std::size_t j = 0; j < sys.n; ++j) {
          Vec row = pad(H2t.row(j), 0, N);
          for (std::size_t t = 0; t < nr; ++t) row[sys.n + t] = -(J2t * P.rays[t])[j];
          for (std::size_t t = 0; t < nl; ++t) row[sys.n + nr + t] = -(J2t * P.lines[t])[j];
          C.add_eq(std::move(row));
        }
        for (std::size_t t = 0; t < nr; ++t) C.add_ineq(-unit(N, sys.n + t));
        auto bad = nonzero_on(C, iota(0, sys.n));
        if (!bad) continue;
        const auto sig = F1.J.elements();
        AubinFailure f;
        f.kind = "face-pair";
        f.stratum = si;
        f.lambda = strata[si].rep;
        f.pair = fp;
        f.lifted = lifted(K, F2.J, sig);
        std::vector<std::size_t> order = iota(0, m);
        auto pt = nonzero_on(f.lifted, order);
        if (!pt) continue;
        f.witness_w = primitive(slice(*bad, 0, sys.n));
        finish(f, *pt, K, sig);
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

Verdict check_rel_aubin(const VarSystem& sys) {
  return check_rel_aubin(sys, sys.TP ? *sys.TP : HCone::whole(sys.l));
}

Verdict check_rel_aubin(const VarSystem& sys, const HCone& TP) {
  Verdict a1 = check_assumption1(sys);
  Verdict v;
  v.condition = "aubin";
  if (a1.status != Status::Holds) {
    v.status = Status::Inconclusive;
    v.reason = "Assumption 1 not certified";
    v.prerequisites.push_back(std::move(a1));
    return v;
  }
  if (!sys.g.is_affine()) {
    v.status = Status::Inconclusive;
    v.reason = "quadratic g: the Aubin analysis is exact only for affine g";
    v.prerequisites.push_back(std::move(a1));
    return v;
  }
  v.prerequisites.push_back(std::move(a1));
  const auto pieces = stationary_pieces(sys);

  // Condition (i): T_P is covered by the q-projections of the stationary pieces.
  if (sys.l > 0) {
    std::vector<Vec> hyper;
    for (const auto& pc : pieces) hyper.insert(hyper.end(), pc.q.rows.begin(), pc.q.rows.end());
    const Stratification cells = stratify_directions(TP, hyper);
    for (const auto& cell : cells.cells) {
      bool covered = false;
      for (const auto& pc : pieces) covered = covered || pc.q.member(cell.rep);
      if (covered) continue;
      v.status = Status::Fails;
      v.reason = "condition (i): some q in T_P admits no u";
      v.certificate.set("q", cell.rep);
      v.certificate.note("condition", "i");
      return v;
    }
  }

  // Condition (ii).
  const auto fails = aubin_condition_failures(sys, TP);
  for (std::size_t k = 0; k < fails.size(); ++k) {
    const auto& f = fails[k];
    StratumReport rep;
    rep.label = f.kind + " breakdown, multiplier stratum " + std::to_string(f.stratum) + ", F1 " + f.pair.F1.J.str() +
                ", F2 " + f.pair.F2.J.str();
    rep.status = Status::Fails;
    rep.data.set("q", f.witness_q);
    rep.data.set("u", f.witness_u);
    rep.data.set("w", f.witness_w);
    rep.data.set("eta", f.eta);
    rep.data.set_face("F1", f.pair.F1.J);
    rep.data.set_face("F2", f.pair.F2.J);
    for (std::size_t i = 0; i < f.q_rays.rays.size(); ++i) rep.data.set("q-ray " + std::to_string(i), f.q_rays.rays[i]);
    for (std::size_t i = 0; i < f.q_rays.lines.size(); ++i) rep.data.set("q-line " + std::to_string(i), f.q_rays.lines[i]);
    v.strata.push_back(std::move(rep));
  }
  if (!fails.empty()) {
    const auto& f = fails.front();
    v.status = Status::Fails;
    v.reason = "condition (ii) breaks down along a direction in T_P";
    v.certificate.note("condition", "ii");
    v.certificate.note("kind", f.kind);
    v.certificate.set("q", f.witness_q);
    if (!f.q_rays.rays.empty()) v.certificate.set("ray", primitive(f.q_rays.rays.front()));
    v.certificate.set("u", f.witness_u);
    v.certificate.set("w", f.witness_w);
    v.certificate.set("eta", f.eta);
    v.certificate.set("lambda", f.lambda);
    v.certificate.set_face("F1", f.pair.F1.J);
    v.certificate.set_face("F2", f.pair.F2.J);
    return v;
  }

  for (std::size_t k = 0; k < pieces.size(); ++k) {
    StratumReport rep;
    rep.label = "DS piece " + std::to_string(k) + ": multiplier stratum " + std::to_string(pieces[k].stratum) +
                ", critical face " + pieces[k].face.J.str();
    rep.status = Status::Holds;
    rep.data.set("lambda", pieces[k].lambda);
    rep.data.note("qu-cone", to_json(pieces[k].qu).dump());
    rep.data.note("qu-eta-cone", to_json(pieces[k].lifted_eta).dump());
    v.strata.push_back(std::move(rep));
  }
  v.status = Status::Holds;
  v.reason = "both Aubin conditions hold on T_P";
  return v;
}

}  // namespace varstab
