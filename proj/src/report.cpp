#include "varstab/report.hpp"

namespace varstab {

// Row indices are reported 1-based, matching the text output.
json to_json(const IndexSet& J) {
  json out = json::array();
  for (auto i : J.elements()) out.push_back(i + 1);
  return out;
}

json to_json(const Certificate& c) {
  json out = json::object();
  for (const auto& [k, v] : c.vectors) out[k] = to_json(v);
  for (const auto& [k, J] : c.faces) out[k] = to_json(J);
  for (const auto& [k, t] : c.notes) out[k] = t;
  return out;
}

json to_json(const Verdict& v) {
  json strata = json::array();
  for (const auto& s : v.strata) {
    strata.push_back({{"label", s.label}, {"status", to_string(s.status)}, {"data", to_json(s.data)}});
  }
  json prereq = json::array();
  for (const auto& p : v.prerequisites) prereq.push_back(to_json(p));
  return {{"condition", v.condition},
          {"status", to_string(v.status)},
          {"reason", v.reason},
          {"certificate", to_json(v.certificate)},
          {"strata", strata},
          {"prerequisites", prereq}};
}

json to_json(const DerivSet& d) {
  json strata = json::array();
  for (const auto& st : d.strata) {
    strata.push_back({{"face", to_json(st.mult.face.J)},
                      {"multipliers", to_json(st.mult.closure)},
                      {"representative", to_json(st.mult.rep)},
                      {"offset", to_json(st.offset)},
                      {"normal_cone", to_json(st.normal)},
                      {"cone", to_json(st.cone)}});
  }
  return {{"q", to_json(d.q)}, {"u", to_json(d.u)}, {"w", to_json(d.w)},
          {"xstar", to_json(d.xstar)}, {"b", to_json(d.b)}, {"strata", strata}};
}

json to_json(const SolutionPieces& S) {
  json pieces = json::array();
  for (const auto& pc : S.pieces) {
    json pats = json::array();
    for (const auto& I : pc.patterns) pats.push_back(to_json(I));
    json entry = {{"patterns", pats}, {"set", to_json(pc.x_set)}};
    if (pc.point) entry["point"] = to_json(*pc.point);
    pieces.push_back(std::move(entry));
  }
  return {{"p", to_json(S.p)}, {"pieces", pieces}};
}

json to_json(const RatioTable& t) {
  json samples = json::array();
  for (const auto& s : t.samples) {
    json e = {{"p", to_json(s.p)}, {"x", to_json(s.x)}};
    if (!s.p2.empty()) e["p2"] = to_json(s.p2);
    e["ratio_sq"] = s.infinite ? json("inf") : to_json(s.ratio_sq);
    samples.push_back(std::move(e));
  }
  json out = {{"samples", samples}, {"skipped", t.skipped}, {"unbounded", t.unbounded()},
              {"max_ratio_sq", to_json(t.max_sq())}};
  if (t.argmax) out["argmax"] = *t.argmax;
  return out;
}

json to_json(const CalmnessReport& r) {
  json out = to_json(r.table);
  out["reference_isolated"] = r.reference_isolated;
  if (r.reference_witness) out["reference_witness"] = to_json(*r.reference_witness);
  return out;
}

}  // namespace varstab
