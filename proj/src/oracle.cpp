#include "varstab/oracle.hpp"

#include <algorithm>

namespace varstab {

namespace {

void require_affine(const VarSystem& sys) {
  if (!sys.affine()) throw OracleError("oracle supports affine systems only");
}

Rational norm_sq(const Vec& v) { return dot(v, v); }

/// Candidate points of a piece inside the box |x − x̄|∞ <= radius.
std::vector<Vec> box_points(const SolutionPiece& pc, const Vec& xbar, const Rational& radius) {
  std::vector<Vec> out;
  if (pc.point) {
    bool inside = true;
    for (std::size_t j = 0; j < xbar.size(); ++j) {
      const Rational d = (*pc.point)[j] - xbar[j];
      inside = inside && d <= radius && -d <= radius;
    }
    if (inside) out.push_back(*pc.point);
    return out;
  }
  const std::size_t n = xbar.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (int sgn : {1, -1}) {
      LinProgram lp(n);
      embed(lp, pc.x_set, 0);
      for (std::size_t k = 0; k < n; ++k) {
        lp.add_upper(k, xbar[k] + radius);
        lp.add_lower(k, xbar[k] - radius);
      }
      lp.set_objective(Rational(sgn) * unit(n, j));
      const LpResult r = lp_solve(lp, Sense::Max);
      if (r.optimal() && std::find(out.begin(), out.end(), r.point) == out.end()) out.push_back(r.point);
    }
  }
  return out;
}

/// Squared distance from x to a piece: Euclidean for points, ∞-norm otherwise.
Rational dist_sq(const SolutionPiece& pc, const Vec& x) {
  if (pc.point) return norm_sq(*pc.point - x);
  const std::size_t n = x.size();
  LinProgram lp(n + 1);
  embed(lp, pc.x_set, 0);
  for (std::size_t j = 0; j < n; ++j) {
    lp.add_le(unit(n + 1, j) - unit(n + 1, n), x[j]);
    lp.add_le(-unit(n + 1, j) - unit(n + 1, n), -x[j]);
  }
  lp.set_objective(unit(n + 1, n));
  const LpResult r = lp_solve(lp, Sense::Min);
  if (!r.optimal()) throw std::logic_error("distance LP to a nonempty piece failed");
  return r.value * r.value;
}

bool in_tangent(const std::optional<HCone>& TP, const Vec& q) { return !TP || TP->member(q); }

}  // namespace

bool SolutionPieces::contains(const Vec& x) const {
  return std::any_of(pieces.begin(), pieces.end(), [&](const SolutionPiece& pc) { return pc.x_set.contains(x); });
}

std::vector<Vec> SolutionPieces::points() const {
  std::vector<Vec> out;
  for (const auto& pc : pieces) {
    if (pc.point) out.push_back(*pc.point);
  }
  return out;
}

bool SolutionPieces::finite() const {
  return std::all_of(pieces.begin(), pieces.end(), [](const SolutionPiece& pc) { return pc.point.has_value(); });
}

SolutionPieces solve_solution_map(const VarSystem& sys, const Vec& p) {
  require_affine(sys);
  if (p.size() != sys.l) throw std::invalid_argument("parameter has wrong dimension");
  const std::size_t n = sys.n;
  const PolyFunc2 gt = derive_gtilde(sys);
  const Vec zero_x = zeros(n);
  // Affine data in x at the fixed p.
  const Vec g0 = gt.eval(concat(p, zero_x));
  const RatMatrix Gx = x_block(sys, gt.jacobian(concat(p, zero_x)));
  const Vec f0 = sys.f.eval(concat(p, zero_x));
  const RatMatrix Fx = x_block(sys, sys.f.jacobian(concat(p, zero_x)));
  const RatMatrix bt = derive_b_at(sys, p, zero_x).transpose();
  const RatMatrix GxT = Gx.transpose();

  const PolySet& D = sys.D;
  const std::size_t rows = D.A.size();
  if (rows >= 24) throw OracleError("too many inequality rows for active-set enumeration");

  SolutionPieces out;
  out.p = p;
  std::vector<SolutionPiece> found;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rows); ++bits) {
    const IndexSet I = IndexSet::from_bits(bits);
    const auto act = I.elements();
    const std::size_t k = act.size(), e = D.E.size(), N = n + k + e;
    PolySet L(N);
    // f(p,x) + bᵀ(A_Iᵀμ + Eᵀν) = 0
    for (std::size_t j = 0; j < n; ++j) {
      Vec row = pad(Fx.row(j), 0, N);
      for (std::size_t t = 0; t < k; ++t) row[n + t] = (bt * D.A[act[t]])[j];
      for (std::size_t t = 0; t < e; ++t) row[n + k + t] = (bt * D.E[t])[j];
      L.add_eq(std::move(row), -f0[j]);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      Vec row = pad(GxT * D.A[i], 0, N);
      const Rational rhs = D.d[i] - dot(D.A[i], g0);
      if (I.contains(i)) {
        L.add_eq(std::move(row), rhs);
      } else {
        L.add_le(std::move(row), rhs);
      }
    }
    for (std::size_t t = 0; t < e; ++t) L.add_eq(pad(GxT * D.E[t], 0, N), D.c[t] - dot(D.E[t], g0));
    for (std::size_t t = 0; t < k; ++t) L.add_le(-unit(N, n + t), Rational(0));
    if (L.empty()) continue;
    SolutionPiece pc;
    pc.patterns.push_back(I);
    pc.x_set = project(L, [&] {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < n; ++j) keep.push_back(j);
      return keep;
    }());
    pc.lifted = std::move(L);
    found.push_back(std::move(pc));
  }

  // Drop pieces contained in others; equal pieces merge their patterns.
  std::vector<bool> dead(found.size(), false);
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (dead[i]) continue;
    for (std::size_t j = 0; j < found.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (contains(found[i].x_set, found[j].x_set)) {
        found[i].patterns.insert(found[i].patterns.end(), found[j].patterns.begin(), found[j].patterns.end());
        dead[j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (dead[i]) continue;
    found[i].point = singleton_point(found[i].x_set);
    out.pieces.push_back(std::move(found[i]));
  }
  return out;
}

bool verify_solution(const VarSystem& sys, const Vec& p, const Vec& x) {
  const Vec px = concat(p, x);
  const Vec z = derive_gtilde(sys).eval(px);
  if (!sys.D.contains(z)) return false;
  const VCone N = normal_cone(sys.D, z);
  const RatMatrix bt = derive_b_at(sys, p, x).transpose();
  const Vec target = -sys.f.eval(px);
  VCone img(sys.n);
  for (const auto& r : N.rays) img.add_ray(bt * r);
  for (const auto& l : N.lines) img.add_line(bt * l);
  return img.member(target);
}

bool RatioTable::unbounded() const {
  return std::any_of(samples.begin(), samples.end(), [](const RatioSample& s) { return s.infinite; });
}

Rational RatioTable::max_sq() const {
  Rational m = 0;
  for (const auto& s : samples) {
    if (!s.infinite && s.ratio_sq > m) m = s.ratio_sq;
  }
  return m;
}

namespace {

void update_argmax(RatioTable& t) {
  t.argmax.reset();
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const auto& s = t.samples[i];
    if (!t.argmax) {
      t.argmax = i;
      continue;
    }
    const auto& best = t.samples[*t.argmax];
    if (best.infinite) continue;
    if (s.infinite || s.ratio_sq > best.ratio_sq) t.argmax = i;
  }
}

}  // namespace

CalmnessReport sample_calmness(const VarSystem& sys, const std::vector<Vec>& grid, const Rational& radius) {
  require_affine(sys);
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  CalmnessReport rep;
  const SolutionPieces ref = solve_solution_map(sys, sys.pbar);
  for (const auto& pc : ref.pieces) {
    for (const auto& x : box_points(pc, sys.xbar, radius)) {
      if (x != sys.xbar && rep.reference_isolated) {
        rep.reference_isolated = false;
        rep.reference_witness = x;
      }
    }
  }
  for (const auto& p : grid) {
    const Vec dp = p - sys.pbar;
    if (is_zero(dp)) {
      ++rep.table.skipped;
      continue;
    }
    const SolutionPieces S = solve_solution_map(sys, p);
    for (const auto& pc : S.pieces) {
      for (const auto& x : box_points(pc, sys.xbar, radius)) {
        RatioSample s;
        s.p = p;
        s.x = x;
        s.ratio_sq = norm_sq(x - sys.xbar) / norm_sq(dp);
        rep.table.samples.push_back(std::move(s));
      }
    }
  }
  update_argmax(rep.table);
  return rep;
}

RatioTable sample_aubin(const VarSystem& sys, const std::vector<Vec>& grid, const std::optional<HCone>& TP,
                        const Rational& radius) {
  require_affine(sys);
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  std::vector<Vec> pts;
  RatioTable t;
  for (const auto& p : grid) {
    if (in_tangent(TP, p - sys.pbar)) {
      pts.push_back(p);
    } else {
      ++t.skipped;
    }
  }
  std::vector<SolutionPieces> sols;
  for (const auto& p : pts) sols.push_back(solve_solution_map(sys, p));
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t c = 0; c < pts.size(); ++c) {
      const Rational dp = norm_sq(pts[a] - pts[c]);
      if (dp.sign() == 0) continue;
      for (const auto& pc : sols[a].pieces) {
        for (const auto& x : box_points(pc, sys.xbar, radius)) {
          RatioSample s;
          s.p = pts[a];
          s.p2 = pts[c];
          s.x = x;
          if (sols[c].empty()) {
            s.infinite = true;
          } else {
            std::optional<Rational> best;
            for (const auto& pc2 : sols[c].pieces) {
              const Rational d = dist_sq(pc2, x);
              if (!best || d < *best) best = d;
            }
            s.ratio_sq = *best / dp;
          }
          t.samples.push_back(std::move(s));
        }
      }
    }
  }
  update_argmax(t);
  return t;
}

}  // namespace varstab
