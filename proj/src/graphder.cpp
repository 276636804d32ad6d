#include "varstab/graphder.hpp"

#include <stdexcept>

#include "varstab/checks.hpp"

namespace varstab {

namespace {

std::vector<Vec> rows_of(const HCone& K, IndexSet J) {
  std::vector<Vec> out;
  for (auto i : J.elements()) out.push_back(K.rows[i]);
  return out;
}

Vec combine(const HCone& K, const std::vector<std::size_t>& idx, const Vec& coeffs) {
  Vec out = zeros(K.dim);
  for (std::size_t t = 0; t < idx.size(); ++t) out = out + coeffs[t] * K.rows[idx[t]];
  return out;
}

std::vector<std::size_t> iota(std::size_t begin, std::size_t count) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(begin + i);
  return v;
}

}  // namespace

FacePair make_face_pair(const HCone& K, const FaceId& F1, const FaceId& F2) {
  if (!F1.J.subset_of(F2.J)) throw std::invalid_argument("face pair must satisfy F2 ⊆ F1");
  FacePair fp{F1, F2, HCone(K.dim), VCone(K.dim)};
  for (auto i : F2.J.elements()) {
    if (F1.J.contains(i)) {
      fp.diff.add_eq(K.rows[i]);
      fp.diff_polar.add_line(K.rows[i]);
    } else {
      fp.diff.add_ineq(K.rows[i]);
      fp.diff_polar.add_ray(K.rows[i]);
    }
  }
  return fp;
}

std::vector<FacePair> nested_face_pairs(const HCone& K, const Vec& w, const std::optional<Vec>& eta) {
  if (!K.member(w)) return {};
  const IndexSet act = K.active(w);
  const auto fs = faces(K);
  std::vector<FacePair> out;
  for (const auto& F1 : fs) {
    if (eta && !in_span(rows_of(K, F1.J), *eta)) continue;
    for (const auto& F2 : fs) {
      if (!F2.J.subset_of(act) || !F1.J.subset_of(F2.J)) continue;
      out.push_back(make_face_pair(K, F1, F2));
    }
  }
  return out;
}

bool gph_normal_tangent_member(const PolySet& D, const Vec& z, const Vec& zstar, const Vec& w, const Vec& eta) {
  if (z.size() != D.dim || !D.contains(z) || zstar.size() != D.dim || !normal_cone(D, z).member(zstar)) {
    throw std::invalid_argument("(z, z*) is not in the graph of the normal cone");
  }
  if (w.size() != D.dim || eta.size() != D.dim) throw std::invalid_argument("dimension mismatch");
  const HCone K = critical_cone(D, z, zstar);
  if (!K.member(w)) return false;
  if (!polar(K).member(eta)) return false;
  return dot(eta, w).is_zero();
}

bool theta_member(const VarSystem& sys, const Vec& v, const Vec& lambda, const Vec& eta) {
  const Vec px = sys.px();
  const Vec z = derive_gtilde(sys).eval(px);
  if (lambda.size() != sys.s || !normal_cone(sys.D, z).member(lambda)) return false;
  const Vec w = gtilde_jacobian(sys, sys.pbar, sys.xbar) * v;
  return gph_normal_tangent_member(sys.D, z, lambda, w, eta);
}

std::vector<FacePair> dir_limiting_normal_gphN(const PolySet& D, const Vec& z, const Vec& zstar, const Vec& w,
                                               const Vec& eta) {
  if (!gph_normal_tangent_member(D, z, zstar, w, eta)) return {};
  return nested_face_pairs(critical_cone(D, z, zstar), w, eta);
}

DerivSet dpsi(const VarSystem& sys, const Vec& xstar, const Vec& qu) {
  if (qu.size() != sys.l + sys.n) throw std::invalid_argument("direction (q,u) has wrong dimension");
  const Vec px = sys.px();
  if (multiplier_Xi(sys, px, xstar).set.empty()) throw std::invalid_argument("x* is not in G(p,x)");
  DerivSet d;
  d.q = slice(qu, 0, sys.l);
  d.u = slice(qu, sys.l, sys.n);
  d.w = gtilde_jacobian(sys, sys.pbar, sys.xbar) * qu;
  d.xstar = xstar;
  d.b = derive_b_at(sys, sys.pbar, sys.xbar);
  const RatMatrix bt = d.b.transpose();
  const auto parts = bterm_parts(sys);
  RatMatrix offset(sys.n, sys.s);
  for (std::size_t k = 0; k < sys.s; ++k) {
    const Vec col = parts[k] * qu;
    for (std::size_t j = 0; j < sys.n; ++j) offset(j, k) = col[j];
  }
  for (auto& st : multiplier_LambdaTilde(sys, px, xstar, qu)) {
    DerivStratum ds{std::move(st), offset, VCone(sys.s), VCone(sys.n)};
    ds.normal = normal_at(ds.mult.critical, d.w);
    for (const auto& r : ds.normal.rays) ds.cone.add_ray(bt * r);
    for (const auto& l : ds.normal.lines) ds.cone.add_line(bt * l);
    d.strata.push_back(std::move(ds));
  }
  return d;
}

std::optional<DerivWitness> dpsi_member(const DerivSet& d, const Vec& vstar) {
  const std::size_t n = d.b.cols(), s = d.b.rows();
  if (vstar.size() != n) throw std::invalid_argument("element has wrong dimension");
  const RatMatrix bt = d.b.transpose();
  for (std::size_t idx = 0; idx < d.strata.size(); ++idx) {
    const auto& st = d.strata[idx];
    const std::size_t nr = st.normal.rays.size(), nl = st.normal.lines.size();
    const std::size_t total = s + nr + nl;
    LinProgram lp(total);
    embed(lp, st.mult.closure, 0);
    for (std::size_t t = 0; t < nr; ++t) lp.add_lower(s + t, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      Vec row = pad(st.offset.row(j), 0, total);
      for (std::size_t t = 0; t < nr; ++t) row[s + t] = (bt * st.normal.rays[t])[j];
      for (std::size_t t = 0; t < nl; ++t) row[s + nr + t] = (bt * st.normal.lines[t])[j];
      lp.add_eq(std::move(row), vstar[j]);
    }
    auto pt = feasible_point(lp);
    if (!pt) continue;
    DerivWitness w{idx, slice(*pt, 0, s), zeros(s)};
    for (std::size_t t = 0; t < nr; ++t) w.eta = w.eta + (*pt)[s + t] * st.normal.rays[t];
    for (std::size_t t = 0; t < nl; ++t) w.eta = w.eta + (*pt)[s + nr + t] * st.normal.lines[t];
    return w;
  }
  return std::nullopt;
}

std::optional<DerivWitness> dpsi_member(const VarSystem& sys, const Vec& xstar, const Vec& qu, const Vec& vstar) {
  return dpsi_member(dpsi(sys, xstar, qu), vstar);
}

Verdict dg_lower_witness(const VarSystem& sys, const Vec& xstar, const Vec& qu, const Vec& lambda, const Vec& eta) {
  const DerivSet d = dpsi(sys, xstar, qu);
  bool found = false;
  for (const auto& st : d.strata) found = found || st.mult.closure.contains(lambda);
  if (!found) throw std::invalid_argument("lambda is not in the directional multiplier set");
  const Vec z = derive_gtilde(sys).eval(sys.px());
  const HCone K = critical_cone(sys.D, z, lambda);
  if (!K.member(d.w) || !normal_at(K, d.w).member(eta)) {
    throw std::invalid_argument("eta is not normal to the critical cone at the direction");
  }
  Verdict sub = check_F_dirmetreg(sys, qu, lambda, eta);
  Verdict out;
  out.condition = "dg-lower-witness";
  const RatMatrix bt = d.b.transpose();
  out.certificate.set("element", d.strata.front().offset * lambda + bt * eta);
  out.certificate.set("lambda", lambda);
  out.certificate.set("eta", eta);
  if (sub.status == Status::Holds) {
    out.status = Status::Holds;
    out.reason = "directional regularity certified; element lies in DG and the tangent is derivable";
  } else {
    out.status = Status::Inconclusive;
    out.reason = "element lies in DPsi, DG-membership uncertified";
  }
  out.prerequisites.push_back(std::move(sub));
  return out;
}

namespace {

std::vector<DirectionPiece> build_pieces(const VarSystem& sys, bool projections) {
  if (!sys.g.is_affine()) throw std::invalid_argument("direction pieces require affine g");
  const Vec px = sys.px();
  const Vec z = derive_gtilde(sys).eval(px);
  const std::size_t m = sys.l + sys.n;
  const RatMatrix Jg = gtilde_jacobian(sys, sys.pbar, sys.xbar);
  const RatMatrix Jgt = Jg.transpose();
  const RatMatrix Jf = sys.f.jacobian(px);
  const RatMatrix bt = derive_b_at(sys, sys.pbar, sys.xbar).transpose();
  const auto strata = stratify_multipliers(sys.D, z, multiplier_Xi(sys, px, default_xstar(sys)).set);

  std::vector<DirectionPiece> out;
  for (std::size_t si = 0; si < strata.size(); ++si) {
    const HCone& K = strata[si].critical;
    for (const auto& F : faces(K)) {
      DirectionPiece pc;
      pc.stratum = si;
      pc.lambda = strata[si].rep;
      pc.critical = K;
      pc.face = F;
      pc.sigma_rows = F.J.elements();
      const std::size_t k = pc.sigma_rows.size(), N = m + k;
      HCone L(N);
      for (std::size_t i = 0; i < K.rows.size(); ++i) {
        Vec row = pad(Jgt * K.rows[i], 0, N);
        if (F.J.contains(i)) {
          L.add_eq(std::move(row));
        } else {
          L.add_ineq(std::move(row));
        }
      }
      for (std::size_t j = 0; j < sys.n; ++j) {
        Vec row = pad(Jf.row(j), 0, N);
        for (std::size_t t = 0; t < k; ++t) row[m + t] = (bt * K.rows[pc.sigma_rows[t]])[j];
        L.add_eq(std::move(row));
      }
      for (std::size_t t = 0; t < k; ++t) {
        if (!K.eq.contains(pc.sigma_rows[t])) L.add_ineq(-unit(N, m + t));
      }
      pc.lifted = canonicalize(L);
      if (projections) {
        RatMatrix to_eta(m + sys.s, N);
        for (std::size_t i = 0; i < m; ++i) to_eta(i, i) = Rational(1);
        for (std::size_t t = 0; t < k; ++t) {
          for (std::size_t r = 0; r < sys.s; ++r) to_eta(m + r, m + t) = K.rows[pc.sigma_rows[t]][r];
        }
        pc.lifted_eta = image(pc.lifted, to_eta);
        pc.qu = image(pc.lifted, selector(N, iota(0, m)));
        pc.q = sys.l == 0 ? HCone(0) : image(pc.lifted, selector(N, iota(0, sys.l)));
      }
      out.push_back(std::move(pc));
    }
  }
  return out;
}

}  // namespace

std::vector<DirectionPiece> stationary_pieces(const VarSystem& sys) { return build_pieces(sys, true); }

ExistenceResult existence_u(const VarSystem& sys, const Vec& q, const std::vector<Vec>& candidates) {
  if (q.size() != sys.l) throw std::invalid_argument("parameter direction has wrong dimension");
  ExistenceResult res;
  const std::size_t m = sys.l + sys.n;
  if (sys.g.is_affine()) {
    for (const auto& pc : build_pieces(sys, false)) {
      const std::size_t N = pc.lifted.dim;
      LinProgram lp(N);
      embed(lp, pc.lifted, 0);
      for (std::size_t j = 0; j < sys.l; ++j) lp.add_eq(unit(N, j), q[j]);
      auto pt = feasible_point(lp);
      if (!pt) continue;
      res.kind = ExistenceResult::Kind::Found;
      res.u = slice(*pt, sys.l, sys.n);
      res.lambda = pc.lambda;
      res.eta = combine(pc.critical, pc.sigma_rows, slice(*pt, m, N - m));
      return res;
    }
    res.kind = ExistenceResult::Kind::None;
    return res;
  }
  if (candidates.empty()) {
    res.kind = ExistenceResult::Kind::Inconclusive;
    res.note = "quadratic g: supply candidate directions u";
    return res;
  }
  const Vec xstar = default_xstar(sys);
  const RatMatrix Jf = sys.f.jacobian(sys.px());
  for (const auto& u : candidates) {
    const Vec qu = concat(q, u);
    if (auto w = dpsi_member(sys, xstar, qu, -(Jf * qu))) {
      res.kind = ExistenceResult::Kind::Found;
      res.u = u;
      res.lambda = w->lambda;
      res.eta = w->eta;
      return res;
    }
  }
  res.kind = ExistenceResult::Kind::Inconclusive;
  res.note = "no supplied candidate solves the inclusion";
  return res;
}

}  // namespace varstab
