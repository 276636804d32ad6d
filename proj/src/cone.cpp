#include "varstab/cone.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace varstab {

HCone HCone::zero(std::size_t d) {
  HCone c(d);
  for (std::size_t i = 0; i < d; ++i) c.add_eq(unit(d, i));
  return c;
}

HCone HCone::nonpos_orthant(std::size_t d) {
  HCone c(d);
  for (std::size_t i = 0; i < d; ++i) c.add_ineq(unit(d, i));
  return c;
}

std::size_t HCone::add_ineq(Vec a) {
  if (a.size() != dim) throw std::invalid_argument("HCone: row has wrong dimension");
  rows.push_back(std::move(a));
  return rows.size() - 1;
}

std::size_t HCone::add_eq(Vec a) {
  const std::size_t i = add_ineq(std::move(a));
  eq.insert(i);
  return i;
}

bool HCone::member(const Vec& z) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int s = dot(rows[i], z).sign();
    if (s > 0 || (s < 0 && eq.contains(i))) return false;
  }
  return true;
}

IndexSet HCone::active(const Vec& z) const {
  IndexSet J;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dot(rows[i], z).is_zero()) J.insert(i);
  }
  return J;
}

VCone::VCone(std::size_t d, std::vector<Vec> r, std::vector<Vec> l) : dim(d) {
  for (auto& x : r) add_ray(std::move(x));
  for (auto& x : l) add_line(std::move(x));
}

void VCone::add_ray(Vec r) {
  if (r.size() != dim) throw std::invalid_argument("VCone: ray has wrong dimension");
  if (!is_zero(r)) rays.push_back(std::move(r));
}

void VCone::add_line(Vec l) {
  if (l.size() != dim) throw std::invalid_argument("VCone: line has wrong dimension");
  if (!is_zero(l)) lines.push_back(std::move(l));
}

std::optional<std::pair<Vec, Vec>> VCone::decompose(const Vec& z) const {
  if (z.size() != dim) throw std::invalid_argument("VCone: point has wrong dimension");
  const std::size_t nr = rays.size();
  const std::size_t nv = nr + lines.size();
  LinProgram lp(nv);
  for (std::size_t k = 0; k < dim; ++k) {
    Vec row = zeros(nv);
    for (std::size_t j = 0; j < nr; ++j) row[j] = rays[j][k];
    for (std::size_t j = 0; j < lines.size(); ++j) row[nr + j] = lines[j][k];
    lp.add_eq(std::move(row), z[k]);
  }
  for (std::size_t j = 0; j < nr; ++j) lp.add_lower(j, Rational(0));
  auto pt = feasible_point(lp);
  if (!pt) return std::nullopt;
  return std::make_pair(slice(*pt, 0, nr), slice(*pt, nr, lines.size()));
}

bool VCone::member(const Vec& z) const {
  if (is_zero(z)) return true;
  return decompose(z).has_value();
}

void PolySet::add_le(Vec a, Rational rhs) {
  if (a.size() != dim) throw std::invalid_argument("PolySet: row has wrong dimension");
  A.push_back(std::move(a));
  d.push_back(std::move(rhs));
}

void PolySet::add_eq(Vec a, Rational rhs) {
  if (a.size() != dim) throw std::invalid_argument("PolySet: row has wrong dimension");
  E.push_back(std::move(a));
  c.push_back(std::move(rhs));
}

bool PolySet::contains(const Vec& z) const {
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (dot(A[i], z) > d[i]) return false;
  }
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (dot(E[i], z) != c[i]) return false;
  }
  return true;
}

IndexSet PolySet::active_ineq(const Vec& z) const {
  IndexSet I;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (dot(A[i], z) == d[i]) I.insert(i);
  }
  return I;
}

LinProgram PolySet::as_lp() const {
  LinProgram lp(dim);
  for (std::size_t i = 0; i < A.size(); ++i) lp.add_le(A[i], d[i]);
  for (std::size_t i = 0; i < E.size(); ++i) lp.add_eq(E[i], c[i]);
  return lp;
}

std::optional<Vec> PolySet::some_point() const { return feasible_point(as_lp()); }

bool PolySet::empty() const { return !some_point().has_value(); }

Vec pad(const Vec& a, std::size_t offset, std::size_t total) {
  if (offset + a.size() > total) throw std::out_of_range("pad: block exceeds total size");
  Vec r = zeros(total);
  for (std::size_t i = 0; i < a.size(); ++i) r[offset + i] = a[i];
  return r;
}

void embed(LinProgram& lp, const HCone& c, std::size_t offset) {
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    Vec row = pad(c.rows[i], offset, lp.num_vars());
    if (c.eq.contains(i)) {
      lp.add_eq(std::move(row), Rational(0));
    } else {
      lp.add_le(std::move(row), Rational(0));
    }
  }
}

void embed(LinProgram& lp, const PolySet& P, std::size_t offset) {
  for (std::size_t i = 0; i < P.A.size(); ++i) lp.add_le(pad(P.A[i], offset, lp.num_vars()), P.d[i]);
  for (std::size_t i = 0; i < P.E.size(); ++i) lp.add_eq(pad(P.E[i], offset, lp.num_vars()), P.c[i]);
}

namespace {

// Rows forced to equality when `J` is imposed in addition to c.eq.
IndexSet implicit_equalities(const HCone& c, IndexSet J) {
  J = J | c.eq;
  const std::size_t s = c.dim;
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (!J.contains(i)) free_rows.push_back(i);
  }
  if (free_rows.empty()) return J;
  const std::size_t nv = s + free_rows.size();
  LinProgram lp(nv);
  Vec obj = zeros(nv);
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (J.contains(i)) lp.add_eq(pad(c.rows[i], 0, nv), Rational(0));
  }
  for (std::size_t k = 0; k < free_rows.size(); ++k) {
    Vec row = pad(c.rows[free_rows[k]], 0, nv);
    row[s + k] = 1;
    lp.add_le(std::move(row), Rational(0));
    lp.add_upper(s + k, Rational(1));
    lp.add_lower(s + k, Rational(0));
    obj[s + k] = 1;
  }
  lp.set_objective(std::move(obj));
  LpResult res = lp_solve(lp, Sense::Max);
  if (!res.optimal()) throw std::logic_error("canonicalize: cone LP not optimal");
  IndexSet out = J;
  for (std::size_t k = 0; k < free_rows.size(); ++k) {
    if (res.point[s + k].is_zero()) out.insert(free_rows[k]);
  }
  return out;
}

Vec normalize_line(Vec v) {
  v = primitive(v);
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    if (x.sign() < 0) v = -v;
    break;
  }
  return v;
}

void dedupe(std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (auto& v : vs) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  vs = std::move(out);
}

}  // namespace

HCone canonicalize(const HCone& c) {
  HCone out = c;
  out.eq = implicit_equalities(c, c.eq);
  return out;
}

IndexSet closure(const HCone& c, IndexSet J) { return implicit_equalities(c, J); }

std::optional<Vec> ri_point(const HCone& c, IndexSet J) {
  LinProgram lp(c.dim);
  J = J | c.eq;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (J.contains(i)) {
      lp.add_eq(c.rows[i], Rational(0));
    } else {
      lp.add_lt(c.rows[i], Rational(0));
    }
  }
  return strict_feasible_point(lp);
}

std::vector<FaceId> faces(const HCone& c) {
  std::vector<FaceId> out;
  std::set<IndexSet> seen;
  std::vector<IndexSet> frontier{closure(c, c.eq)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<IndexSet> next;
    for (const auto& J : frontier) {
      out.push_back({J});
      for (std::size_t i = 0; i < c.rows.size(); ++i) {
        if (J.contains(i)) continue;
        IndexSet child = J;
        child.insert(i);
        child = closure(c, child);
        if (seen.insert(child).second) next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const FaceId& a, const FaceId& b) {
    if (a.J.size() != b.J.size()) return a.J.size() < b.J.size();
    return a.J < b.J;
  });
  return out;
}

namespace {
void require_face(const HCone& c, const FaceId& f) {
  if (!c.eq.subset_of(f.J) || closure(c, f.J) != f.J) {
    throw std::invalid_argument("index set " + f.J.str() + " is not a face of the cone");
  }
}
}  // namespace

HCone face_cone(const HCone& c, const FaceId& f) {
  require_face(c, f);
  HCone out = c;
  out.eq = f.J;
  return out;
}

std::vector<Vec> face_diff(const HCone& c, const FaceId& f) {
  require_face(c, f);
  std::vector<Vec> rows;
  for (auto i : f.J.elements()) rows.push_back(c.rows[i]);
  if (rows.empty()) {
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < c.dim; ++i) basis.push_back(unit(c.dim, i));
    return basis;
  }
  return kernel_basis(RatMatrix::from_rows(c.dim, rows));
}

VCone polar(const HCone& c) {
  VCone v(c.dim);
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (c.eq.contains(i)) {
      v.add_line(c.rows[i]);
    } else {
      v.add_ray(c.rows[i]);
    }
  }
  return v;
}

HCone polar_v(const VCone& v) {
  HCone c(v.dim);
  for (const auto& r : v.rays) c.add_ineq(r);
  for (const auto& l : v.lines) c.add_eq(l);
  return c;
}

VCone generators(const HCone& c) {
  const std::size_t s = c.dim;
  struct Ray {
    Vec v;
    IndexSet zero;  // processed rows vanishing on v
  };
  std::vector<Vec> lines;
  for (std::size_t i = 0; i < s; ++i) lines.push_back(unit(s, i));
  std::vector<Ray> rays;
  std::vector<Vec> processed;
  IndexSet processed_set;

  for (std::size_t k = 0; k < c.rows.size(); ++k) {
    const Vec& a = c.rows[k];
    const bool is_eq = c.eq.contains(k);
    std::size_t pick = lines.size();
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (!dot(a, lines[j]).is_zero()) {
        pick = j;
        break;
      }
    }
    if (pick < lines.size()) {
      Vec l0 = lines[pick];
      Rational al0 = dot(a, l0);
      if (al0.sign() > 0) {
        l0 = -l0;
        al0 = -al0;
      }
      std::vector<Vec> new_lines;
      for (std::size_t j = 0; j < lines.size(); ++j) {
        if (j == pick) continue;
        const Rational f = dot(a, lines[j]) / al0;
        new_lines.push_back(f.is_zero() ? lines[j] : lines[j] - f * l0);
      }
      for (auto& r : rays) {
        const Rational f = dot(a, r.v) / al0;
        if (!f.is_zero()) r.v = r.v - f * l0;
        r.zero.insert(k);
      }
      lines = std::move(new_lines);
      if (!is_eq) rays.push_back({primitive(l0), processed_set});
    } else {
      std::vector<Ray> pos, neg, next;
      std::vector<Rational> pos_val, neg_val;
      for (auto& r : rays) {
        const Rational val = dot(a, r.v);
        if (val.sign() > 0) {
          pos.push_back(r);
          pos_val.push_back(val);
        } else if (val.sign() < 0) {
          neg.push_back(r);
          neg_val.push_back(val);
        } else {
          r.zero.insert(k);
          next.push_back(r);
        }
      }
      const std::size_t target = s - lines.size();  // rank of processed rows
      for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = 0; j < neg.size(); ++j) {
          const IndexSet common = pos[i].zero & neg[j].zero;
          if (target < 2 || common.size() + 2 < target) continue;
          std::vector<Vec> sub;
          for (auto idx : common.elements()) sub.push_back(c.rows[idx]);
          if (rank(s, sub) != target - 2) continue;
          Vec combo = pos_val[i] * neg[j].v - neg_val[j] * pos[i].v;
          IndexSet z = common;
          z.insert(k);
          next.push_back({primitive(combo), z});
        }
      }
      if (!is_eq) {
        for (auto& r : neg) next.push_back(std::move(r));
      }
      rays = std::move(next);
    }
    processed.push_back(a);
    processed_set.insert(k);
  }

  VCone out(s);
  std::vector<Vec> rv;
  for (auto& r : rays) rv.push_back(primitive(r.v));
  dedupe(rv);
  // Reduce lines to an RREF basis so the output is canonical.
  if (!lines.empty()) {
    std::vector<std::size_t> piv;
    RatMatrix R = rref(RatMatrix::from_rows(s, lines), &piv);
    lines.clear();
    for (std::size_t i = 0; i < piv.size(); ++i) lines.push_back(normalize_line(R.row(i)));
  }
  for (auto& r : rv) out.add_ray(std::move(r));
  for (auto& l : lines) out.add_line(std::move(l));
  return out;
}

HCone hrep(const VCone& v) {
  const VCone g = generators(polar_v(v));
  HCone out(v.dim);
  for (const auto& r : g.rays) out.add_ineq(r);
  for (const auto& l : g.lines) out.add_eq(l);
  return canonicalize(out);
}

HCone tangent_cone(const PolySet& D, const Vec& z) {
  if (z.size() != D.dim || !D.contains(z)) throw std::invalid_argument("infeasible point");
  HCone T(D.dim);
  for (std::size_t i = 0; i < D.A.size(); ++i) {
    if (dot(D.A[i], z) == D.d[i]) T.add_ineq(D.A[i]);
  }
  for (const auto& e : D.E) T.add_eq(e);
  return canonicalize(T);
}

VCone normal_cone(const PolySet& D, const Vec& z) {
  if (z.size() != D.dim || !D.contains(z)) throw std::invalid_argument("infeasible point");
  VCone N(D.dim);
  for (std::size_t i = 0; i < D.A.size(); ++i) {
    if (dot(D.A[i], z) == D.d[i]) N.add_ray(D.A[i]);
  }
  for (const auto& e : D.E) N.add_line(e);
  return N;
}

HCone critical_cone(const PolySet& D, const Vec& z, const Vec& zstar) {
  HCone T = tangent_cone(D, z);
  if (zstar.size() != D.dim || !normal_cone(D, z).member(zstar)) {
    throw std::invalid_argument("not a normal vector");
  }
  HCone ext = T;
  const std::size_t extra = ext.add_eq(zstar);
  ext = canonicalize(ext);
  HCone K = T;
  K.eq = ext.eq;
  K.eq.erase(extra);
  return K;
}

namespace {
void require_member(const HCone& K, const Vec& w) {
  if (w.size() != K.dim || !K.member(w)) throw std::invalid_argument("point not in cone");
}
}  // namespace

HCone tangent_at(const HCone& K, const Vec& w) {
  require_member(K, w);
  HCone out(K.dim);
  for (std::size_t i = 0; i < K.rows.size(); ++i) {
    if (!dot(K.rows[i], w).is_zero()) continue;
    if (K.eq.contains(i)) {
      out.add_eq(K.rows[i]);
    } else {
      out.add_ineq(K.rows[i]);
    }
  }
  return canonicalize(out);
}

VCone normal_at(const HCone& K, const Vec& w) {
  require_member(K, w);
  VCone out(K.dim);
  for (std::size_t i = 0; i < K.rows.size(); ++i) {
    if (!dot(K.rows[i], w).is_zero()) continue;
    if (K.eq.contains(i)) {
      out.add_line(K.rows[i]);
    } else {
      out.add_ray(K.rows[i]);
    }
  }
  return out;
}

FaceId minimal_face(const HCone& K, const Vec& w) {
  require_member(K, w);
  return {K.active(w)};
}

bool ri_contains(const HCone& K, const FaceId& f, const Vec& w) {
  return w.size() == K.dim && K.member(w) && K.active(w) == f.J;
}

bool is_trivial(const HCone& c) { return !nonzero_element(c).has_value(); }

bool is_trivial(const VCone& c) { return c.rays.empty() && c.lines.empty(); }

std::optional<Vec> nonzero_element(const HCone& c) {
  const HCone k = canonicalize(c);
  std::vector<Vec> eq_rows;
  for (auto i : k.eq.elements()) eq_rows.push_back(k.rows[i]);
  const bool has_strict = k.eq.size() < k.rows.size();
  if (has_strict) return ri_point(k, k.eq);
  if (eq_rows.empty()) {
    if (c.dim == 0) return std::nullopt;
    return unit(c.dim, 0);
  }
  auto ker = kernel_basis(RatMatrix::from_rows(c.dim, eq_rows));
  if (ker.empty()) return std::nullopt;
  return ker.front();
}

bool contains(const HCone& big, const HCone& small) {
  if (big.dim != small.dim) throw std::invalid_argument("contains: dimension mismatch");
  auto exceeds = [&](const Vec& a) {
    LinProgram lp(small.dim);
    embed(lp, small, 0);
    lp.add_le(a, Rational(1));
    lp.set_objective(a);
    LpResult r = lp_solve(lp, Sense::Max);
    return r.optimal() && r.value.sign() > 0;
  };
  for (std::size_t i = 0; i < big.rows.size(); ++i) {
    if (exceeds(big.rows[i])) return false;
    if (big.eq.contains(i) && exceeds(-big.rows[i])) return false;
  }
  return true;
}

bool contains(const VCone& big, const VCone& small) {
  for (const auto& r : small.rays) {
    if (!big.member(r)) return false;
  }
  for (const auto& l : small.lines) {
    if (!big.member(l) || !big.member(-l)) return false;
  }
  return true;
}

bool contains(const HCone& big, const VCone& small) {
  for (const auto& r : small.rays) {
    if (!big.member(r)) return false;
  }
  for (const auto& l : small.lines) {
    if (!big.member(l) || !big.member(-l)) return false;
  }
  return true;
}

bool same_set(const HCone& a, const HCone& b) { return contains(a, b) && contains(b, a); }

bool same_set(const VCone& a, const VCone& b) { return contains(a, b) && contains(b, a); }

HCone image(const HCone& c, const RatMatrix& M) {
  if (M.cols() != c.dim) throw std::invalid_argument("image: dimension mismatch");
  const VCone g = generators(c);
  VCone img(M.rows());
  for (const auto& r : g.rays) img.add_ray(M * r);
  for (const auto& l : g.lines) img.add_line(M * l);
  return hrep(img);
}

HCone preimage(const HCone& c, const RatMatrix& M) {
  if (M.rows() != c.dim) throw std::invalid_argument("preimage: dimension mismatch");
  HCone out(M.cols());
  const RatMatrix Mt = M.transpose();
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    Vec row = Mt * c.rows[i];
    if (c.eq.contains(i)) {
      out.add_eq(std::move(row));
    } else {
      out.add_ineq(std::move(row));
    }
  }
  return out;
}

HCone intersect(const HCone& a, const HCone& b) {
  if (a.dim != b.dim) throw std::invalid_argument("intersect: dimension mismatch");
  HCone out = a;
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    if (b.eq.contains(i)) {
      out.add_eq(b.rows[i]);
    } else {
      out.add_ineq(b.rows[i]);
    }
  }
  return out;
}

RatMatrix selector(std::size_t n, const std::vector<std::size_t>& keep) {
  RatMatrix M(keep.size(), n);
  for (std::size_t k = 0; k < keep.size(); ++k) M(k, keep[k]) = 1;
  return M;
}

PolySet project(const PolySet& P, const std::vector<std::size_t>& keep) {
  const std::size_t m = keep.size();
  PolySet out(m);
  if (P.empty()) {
    out.add_le(zeros(m), Rational(-1));
    return out;
  }
  // Homogenize: (z, t) with t >= 0.
  const std::size_t n = P.dim;
  HCone C(n + 1);
  for (std::size_t i = 0; i < P.A.size(); ++i) {
    Vec row = P.A[i];
    row.push_back(-P.d[i]);
    C.add_ineq(std::move(row));
  }
  for (std::size_t i = 0; i < P.E.size(); ++i) {
    Vec row = P.E[i];
    row.push_back(-P.c[i]);
    C.add_eq(std::move(row));
  }
  C.add_ineq(-unit(n + 1, n));
  std::vector<std::size_t> keep_t = keep;
  keep_t.push_back(n);
  const HCone img = image(C, selector(n + 1, keep_t));
  for (std::size_t i = 0; i < img.rows.size(); ++i) {
    Vec alpha = slice(img.rows[i], 0, m);
    const Rational rhs = -img.rows[i][m];
    if (is_zero(alpha)) continue;  // the row -t <= 0 and its multiples
    if (img.eq.contains(i)) {
      out.add_eq(std::move(alpha), rhs);
    } else {
      out.add_le(std::move(alpha), rhs);
    }
  }
  return out;
}

bool contains(const PolySet& big, const PolySet& small) {
  if (big.dim != small.dim) throw std::invalid_argument("contains: dimension mismatch");
  if (small.empty()) return true;
  auto max_of = [&](const Vec& a) {
    LinProgram lp = small.as_lp();
    lp.set_objective(a);
    return lp_solve(lp, Sense::Max);
  };
  for (std::size_t i = 0; i < big.A.size(); ++i) {
    LpResult r = max_of(big.A[i]);
    if (!r.optimal() || r.value > big.d[i]) return false;
  }
  for (std::size_t i = 0; i < big.E.size(); ++i) {
    LpResult hi = max_of(big.E[i]);
    LpResult lo = max_of(-big.E[i]);
    if (!hi.optimal() || !lo.optimal() || hi.value != big.c[i] || -lo.value != big.c[i]) return false;
  }
  return true;
}

bool same_set(const PolySet& a, const PolySet& b) { return contains(a, b) && contains(b, a); }

std::optional<Vec> singleton_point(const PolySet& P) {
  auto pt = P.some_point();
  if (!pt) return std::nullopt;
  for (std::size_t j = 0; j < P.dim; ++j) {
    for (int sgn : {1, -1}) {
      LinProgram lp = P.as_lp();
      lp.set_objective(Rational(sgn) * unit(P.dim, j));
      const LpResult r = lp_solve(lp, Sense::Max);
      if (!r.optimal() || r.value != Rational(sgn) * (*pt)[j]) return std::nullopt;
    }
  }
  return pt;
}

}  // namespace varstab
