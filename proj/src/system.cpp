#include "varstab/system.hpp"

namespace varstab {

PolyFunc2::PolyFunc2(std::size_t in_dim, std::size_t out_dim) : in_(in_dim) {
  comps_.resize(out_dim);
  for (auto& c : comps_) {
    c.lin = zeros(in_dim);
    c.Q = RatMatrix(in_dim, in_dim);
  }
}

void PolyFunc2::add_monomial(std::size_t k, std::size_t i, std::size_t j, const Rational& r) {
  if (i >= in_ || j >= in_) throw std::out_of_range("monomial variable out of range");
  auto& Q = comps_.at(k).Q;
  if (i == j) {
    Q(i, i) += r;
  } else {
    const Rational half = r / Rational(2);
    Q(i, j) += half;
    Q(j, i) += half;
  }
}

Vec PolyFunc2::eval(const Vec& y) const {
  if (y.size() != in_) throw std::invalid_argument("PolyFunc2::eval: wrong input dimension");
  Vec out(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    const auto& c = comps_[k];
    out[k] = c.c + dot(c.lin, y) + dot(y, c.Q * y);
  }
  return out;
}

RatMatrix PolyFunc2::jacobian(const Vec& y) const {
  if (y.size() != in_) throw std::invalid_argument("PolyFunc2::jacobian: wrong input dimension");
  RatMatrix J(comps_.size(), in_);
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    const Vec qy = comps_[k].Q * y;
    for (std::size_t j = 0; j < in_; ++j) J(k, j) = comps_[k].lin[j] + Rational(2) * qy[j];
  }
  return J;
}

RatMatrix PolyFunc2::hessian(std::size_t k) const {
  RatMatrix H = comps_.at(k).Q;
  for (std::size_t i = 0; i < in_; ++i)
    for (std::size_t j = 0; j < in_; ++j) H(i, j) *= Rational(2);
  return H;
}

Rational PolyFunc2::quad_form(std::size_t k, const Vec& y) const { return dot(y, comps_.at(k).Q * y); }

bool PolyFunc2::is_affine() const {
  for (const auto& c : comps_) {
    if (!(c.Q == RatMatrix(in_, in_))) return false;
  }
  return true;
}

PolyFunc2 PolyFunc2::compose_linear(const RatMatrix& P) const {
  if (P.rows() != in_) throw std::invalid_argument("compose_linear: dimension mismatch");
  PolyFunc2 out(P.cols(), comps_.size());
  const RatMatrix Pt = P.transpose();
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    out.comps_[k].c = comps_[k].c;
    out.comps_[k].lin = Pt * comps_[k].lin;
    out.comps_[k].Q = Pt * comps_[k].Q * P;
  }
  return out;
}

bool operator==(const PolyFunc2& a, const PolyFunc2& b) {
  if (a.in_ != b.in_ || a.comps_.size() != b.comps_.size()) return false;
  for (std::size_t k = 0; k < a.comps_.size(); ++k) {
    if (a.comps_[k].c != b.comps_[k].c || a.comps_[k].lin != b.comps_[k].lin || !(a.comps_[k].Q == b.comps_[k].Q))
      return false;
  }
  return true;
}

void VarSystem::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (f.in_dim() != l + n || f.out_dim() != n) fail("f must map R^(l+n) to R^n");
  if (g.in_dim() != l + 2 * n || g.out_dim() != s) fail("g must map R^(l+2n) to R^s");
  if (D.dim != s) fail("D must live in R^s");
  if (pbar.size() != l || xbar.size() != n) fail("reference point has wrong dimension");
  if (TP && TP->dim != l) fail("P_tangent must live in R^l");
  if (s > IndexSet::kMaxRows || D.A.size() + D.E.size() > IndexSet::kMaxRows) fail("too many rows in D");
  if (!D.contains(g.eval(ybar()))) fail("reference point infeasible: g(p,x,x) is not in D");
}

RatMatrix VarSystem::embed() const {
  RatMatrix P(l + 2 * n, l + n);
  for (std::size_t i = 0; i < l + n; ++i) P(i, i) = 1;
  for (std::size_t i = 0; i < n; ++i) P(l + n + i, l + i) = 1;
  return P;
}

PolyFunc2 derive_gtilde(const VarSystem& sys) { return sys.g.compose_linear(sys.embed()); }

RatMatrix derive_b_at(const VarSystem& sys, const Vec& p, const Vec& x) {
  const RatMatrix J = sys.g.jacobian(concat(concat(p, x), x));
  return J.col_block(sys.l + sys.n, sys.n);
}

RatMatrix gtilde_jacobian(const VarSystem& sys, const Vec& p, const Vec& x) {
  return derive_gtilde(sys).jacobian(concat(p, x));
}

RatMatrix x_block(const VarSystem& sys, const RatMatrix& M) { return M.col_block(sys.l, sys.n); }

std::vector<RatMatrix> bterm_parts(const VarSystem& sys) {
  const RatMatrix P = sys.embed();
  std::vector<RatMatrix> parts;
  std::vector<std::size_t> zrows;
  for (std::size_t i = 0; i < sys.n; ++i) zrows.push_back(sys.l + sys.n + i);
  for (std::size_t k = 0; k < sys.s; ++k) {
    parts.push_back(sys.g.hessian(k).select_rows(zrows) * P);
  }
  return parts;
}

RatMatrix bterm_grad(const VarSystem& sys, const Vec& lambda) {
  RatMatrix out(sys.n, sys.l + sys.n);
  const auto parts = bterm_parts(sys);
  for (std::size_t k = 0; k < sys.s; ++k) {
    if (lambda[k].is_zero()) continue;
    const RatMatrix& Mk = parts[k];
    for (std::size_t i = 0; i < Mk.rows(); ++i)
      for (std::size_t j = 0; j < Mk.cols(); ++j) out(i, j) += lambda[k] * Mk(i, j);
  }
  return out;
}

RatMatrix lagrangian_grad(const VarSystem& sys, const Vec& lambda, const Vec& p, const Vec& x) {
  return sys.f.jacobian(concat(p, x)) + bterm_grad(sys, lambda);
}

RatMatrix lagrangian_grad_x(const VarSystem& sys, const Vec& lambda, const Vec& p, const Vec& x) {
  return x_block(sys, lagrangian_grad(sys, lambda, p, x));
}

Vec curvature_coeffs(const VarSystem& sys, const Vec& v) {
  Vec c(sys.s);
  for (std::size_t k = 0; k < sys.s; ++k) c[k] = Rational(2) * sys.g.quad_form(k, v);
  return c;
}

Vec default_xstar(const VarSystem& sys) { return -sys.f.eval(sys.px()); }

HCone normal_cone_hrep(const PolySet& D, const Vec& z) {
  const VCone gen = generators(tangent_cone(D, z));
  HCone N(D.dim);
  for (const auto& r : gen.rays) N.add_ineq(r);
  for (const auto& l : gen.lines) N.add_eq(l);
  return canonicalize(N);
}

std::string to_string(MultTag t) {
  switch (t) {
    case MultTag::Lambda: return "Lambda";
    case MultTag::LambdaDir: return "Lambda_dir";
    case MultTag::Xi: return "Xi";
    case MultTag::XiDir: return "Xi_dir";
    case MultTag::LambdaTilde: return "Lambda_tilde";
  }
  return "?";
}

namespace {

PolySet cone_as_set(const HCone& c) {
  PolySet P(c.dim);
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (c.eq.contains(i)) {
      P.add_eq(c.rows[i], Rational(0));
    } else {
      P.add_le(c.rows[i], Rational(0));
    }
  }
  return P;
}

PolySet empty_set(std::size_t dim) {
  PolySet P(dim);
  P.add_le(zeros(dim), Rational(-1));
  return P;
}

}  // namespace

MultiplierPoly multiplier_Lambda(const VarSystem& sys, const Vec& y, const Vec& ystar) {
  const Vec z = sys.g.eval(y);
  PolySet P = cone_as_set(normal_cone_hrep(sys.D, z));
  const RatMatrix J = sys.g.jacobian(y);
  if (ystar.size() != J.cols()) throw std::invalid_argument("multiplier_Lambda: y* has wrong dimension");
  for (std::size_t j = 0; j < J.cols(); ++j) P.add_eq(J.col(j), ystar[j]);
  return {MultTag::Lambda, std::move(P)};
}

MultiplierPoly multiplier_Lambda_dir(const VarSystem& sys, const Vec& y, const Vec& ystar, const Vec& v) {
  MultiplierPoly m = multiplier_Lambda(sys, y, ystar);
  if (m.set.empty()) throw MultiplierError("multiplier set is empty");
  m.tag = MultTag::LambdaDir;
  const Vec c = curvature_coeffs(sys, v);
  if (is_zero(c)) return m;
  LinProgram lp = m.set.as_lp();
  lp.set_objective(c);
  const LpResult r = lp_solve(lp, Sense::Max);
  if (r.status == LpStatus::Unbounded) throw MultiplierError("directional multiplier set undefined (unbounded)");
  m.set.add_eq(c, r.value);
  return m;
}

MultiplierPoly multiplier_Xi(const VarSystem& sys, const Vec& px, const Vec& xstar) {
  const Vec p = slice(px, 0, sys.l), x = slice(px, sys.l, sys.n);
  const Vec z = derive_gtilde(sys).eval(px);
  PolySet P = cone_as_set(normal_cone_hrep(sys.D, z));
  const RatMatrix b = derive_b_at(sys, p, x);
  for (std::size_t j = 0; j < sys.n; ++j) P.add_eq(b.col(j), xstar[j]);
  return {MultTag::Xi, std::move(P)};
}

MultiplierPoly multiplier_Xi_dir(const VarSystem& sys, const Vec& px, const Vec& xstar, const Vec& qu) {
  const Vec p = slice(px, 0, sys.l), x = slice(px, sys.l, sys.n);
  const Vec z = derive_gtilde(sys).eval(px);
  const Vec w = gtilde_jacobian(sys, p, x) * qu;
  if (!tangent_cone(sys.D, z).member(w)) return {MultTag::XiDir, empty_set(sys.s)};
  MultiplierPoly m = multiplier_Xi(sys, px, xstar);
  m.tag = MultTag::XiDir;
  m.set.add_eq(w, Rational(0));
  return m;
}

std::vector<MultiplierStratum> stratify_multipliers(const PolySet& D, const Vec& z, const PolySet& M) {
  std::vector<MultiplierStratum> out;
  if (M.empty()) return out;
  const HCone N = normal_cone_hrep(D, z);
  for (const auto& G : faces(N)) {
    LinProgram lp = M.as_lp();
    for (std::size_t i = 0; i < N.rows.size(); ++i) {
      if (G.J.contains(i)) {
        lp.add_eq(N.rows[i], Rational(0));
      } else {
        lp.add_lt(N.rows[i], Rational(0));
      }
    }
    auto rep = strict_feasible_point(lp);
    if (!rep) continue;
    PolySet closure = M;
    for (auto i : G.J.elements()) closure.add_eq(N.rows[i], Rational(0));
    out.push_back({G, std::move(closure), *rep, critical_cone(D, z, *rep)});
  }
  return out;
}

std::vector<MultiplierStratum> multiplier_LambdaTilde(const VarSystem& sys, const Vec& px, const Vec& xstar,
                                                      const Vec& qu) {
  const MultiplierPoly xi = multiplier_Xi_dir(sys, px, xstar, qu);
  const Vec z = derive_gtilde(sys).eval(px);
  auto strata = stratify_multipliers(sys.D, z, xi.set);
  if (sys.g.is_affine() || strata.empty()) return strata;
  const Vec y = concat(px, slice(px, sys.l, sys.n));
  const Vec v = concat(qu, slice(qu, sys.l, sys.n));
  const Vec c = curvature_coeffs(sys, v);
  if (is_zero(c)) return strata;
  const RatMatrix J = sys.g.jacobian(y);
  const HCone N = normal_cone_hrep(sys.D, z);
  std::vector<MultiplierStratum> kept;
  for (auto& st : strata) {
    // λ is an argmax over N_D ∩ (λ + ker ∇g(y)ᵀ) iff c·d <= 0 on the tangent
    // cone of that set at λ, which depends only on the face of λ.
    LinProgram lp(sys.s);
    for (std::size_t j = 0; j < J.cols(); ++j) lp.add_eq(J.col(j), Rational(0));
    for (auto i : st.face.J.elements()) {
      if (N.eq.contains(i)) {
        lp.add_eq(N.rows[i], Rational(0));
      } else {
        lp.add_le(N.rows[i], Rational(0));
      }
    }
    lp.add_le(c, Rational(1));
    lp.set_objective(c);
    const LpResult r = lp_solve(lp, Sense::Max);
    if (r.optimal() && r.value.sign() <= 0) kept.push_back(std::move(st));
  }
  return kept;
}

}  // namespace varstab
