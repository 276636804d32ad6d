#include "varstab/io.hpp"

#include <fstream>
#include <sstream>

namespace varstab {

json to_json(const Rational& r) { return r.str(); }

json to_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

json to_json(const RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

json to_json(const HCone& c) {
  json j{{"dim", c.dim}, {"ineq", json::array()}, {"eq", json::array()}};
  for (std::size_t i = 0; i < c.rows.size(); ++i) j[c.eq.contains(i) ? "eq" : "ineq"].push_back(to_json(c.rows[i]));
  return j;
}

json to_json(const VCone& c) {
  json j{{"dim", c.dim}, {"rays", json::array()}, {"lines", json::array()}};
  for (const auto& r : c.rays) j["rays"].push_back(to_json(r));
  for (const auto& l : c.lines) j["lines"].push_back(to_json(l));
  return j;
}

json to_json(const PolySet& P) {
  json j{{"dim", P.dim}, {"ineq", json::array()}, {"eq", json::array()}};
  for (std::size_t i = 0; i < P.A.size(); ++i) {
    Vec row = P.A[i];
    row.push_back(P.d[i]);
    j["ineq"].push_back(to_json(row));
  }
  for (std::size_t i = 0; i < P.E.size(); ++i) {
    Vec row = P.E[i];
    row.push_back(P.c[i]);
    j["eq"].push_back(to_json(row));
  }
  return j;
}

namespace {

std::string var_name(const VarSystem& sys, std::size_t idx) {
  if (idx < sys.l) return "p" + std::to_string(idx + 1);
  idx -= sys.l;
  if (idx < sys.n) return "x" + std::to_string(idx + 1);
  return "z" + std::to_string(idx - sys.n + 1);
}

json component_to_json(const VarSystem& sys, const PolyComponent& c) {
  json j{{"const", c.c.str()}, {"lin", json::object()}, {"quad", json::array()}};
  for (std::size_t i = 0; i < c.lin.size(); ++i) {
    if (!c.lin[i].is_zero()) j["lin"][var_name(sys, i)] = c.lin[i].str();
  }
  for (std::size_t i = 0; i < c.Q.rows(); ++i) {
    for (std::size_t k = i; k < c.Q.cols(); ++k) {
      Rational r = i == k ? c.Q(i, i) : c.Q(i, k) + c.Q(k, i);
      if (!r.is_zero()) j["quad"].push_back({var_name(sys, i), var_name(sys, k), r.str()});
    }
  }
  return j;
}

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

std::size_t count_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) schema(where, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) schema(where + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

// Maps "p3" / "x1" / "z2" to a flat index.
std::size_t var_index(const std::string& name, std::size_t l, std::size_t n, bool allow_z, const std::string& where) {
  if (name.size() < 2) schema(where, "bad variable name '" + name + "'");
  const char kind = name[0];
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(name.substr(1), &used);
    if (used != name.size() - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    schema(where, "bad variable name '" + name + "'");
  }
  if (k == 0) schema(where, "variable indices start at 1: '" + name + "'");
  --k;
  if (kind == 'p' && k < l) return k;
  if (kind == 'x' && k < n) return l + k;
  if (kind == 'z' && allow_z && k < n) return l + n + k;
  schema(where, "unknown variable '" + name + "'");
}

PolyFunc2 func_from_json(const json& j, std::size_t l, std::size_t n, std::size_t out, bool allow_z,
                         const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of components");
  if (j.size() != out) {
    schema(where, "expected " + std::to_string(out) + " components, got " + std::to_string(j.size()));
  }
  const std::size_t in = allow_z ? l + 2 * n : l + n;
  PolyFunc2 F(in, out);
  for (std::size_t k = 0; k < out; ++k) {
    const std::string here = where + "[" + std::to_string(k) + "]";
    const json& c = j[k];
    if (!c.is_object()) schema(here, "expected an object");
    for (auto it = c.begin(); it != c.end(); ++it) {
      if (it.key() != "const" && it.key() != "lin" && it.key() != "quad") schema(here, "unknown key '" + it.key() + "'");
    }
    if (c.contains("const")) F.comp(k).c = rational_from_json(c["const"], here + ".const");
    if (c.contains("lin")) {
      if (!c["lin"].is_object()) schema(here + ".lin", "expected an object");
      for (auto it = c["lin"].begin(); it != c["lin"].end(); ++it) {
        const std::size_t idx = var_index(it.key(), l, n, allow_z, here + ".lin");
        F.comp(k).lin[idx] += rational_from_json(it.value(), here + ".lin." + it.key());
      }
    }
    if (c.contains("quad")) {
      if (!c["quad"].is_array()) schema(here + ".quad", "expected an array");
      for (std::size_t t = 0; t < c["quad"].size(); ++t) {
        const std::string qh = here + ".quad[" + std::to_string(t) + "]";
        const json& term = c["quad"][t];
        if (!term.is_array() || term.size() != 3 || !term[0].is_string() || !term[1].is_string()) {
          schema(qh, "expected [\"var\", \"var\", \"coefficient\"]");
        }
        const std::size_t a = var_index(term[0].get<std::string>(), l, n, allow_z, qh);
        const std::size_t b = var_index(term[1].get<std::string>(), l, n, allow_z, qh);
        F.add_monomial(k, a, b, rational_from_json(term[2], qh + "[2]"));
      }
    }
  }
  return F;
}

}  // namespace

json to_json(const VarSystem& sys) {
  json j;
  j["dims"] = {{"l", sys.l}, {"n", sys.n}, {"s", sys.s}};
  j["f"] = json::array();
  for (std::size_t k = 0; k < sys.f.out_dim(); ++k) j["f"].push_back(component_to_json(sys, sys.f.comp(k)));
  j["g"] = json::array();
  for (std::size_t k = 0; k < sys.g.out_dim(); ++k) j["g"].push_back(component_to_json(sys, sys.g.comp(k)));
  j["D"] = to_json(sys.D);
  j["refpoint"] = {{"p", to_json(sys.pbar)}, {"x", to_json(sys.xbar)}};
  if (sys.TP) j["P_tangent"] = to_json(*sys.TP);
  return j;
}

Rational rational_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a rational string such as \"-3/4\"");
}

Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

namespace {

template <class Add>
void read_rows(const json& j, const char* key, std::size_t width, const std::string& where, Add add) {
  if (!j.contains(key)) return;
  const json& rows = j.at(key);
  if (!rows.is_array()) schema(where + "." + key, "expected an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string here = where + "." + key + "[" + std::to_string(i) + "]";
    Vec row = vec_from_json(rows[i], here);
    add(std::move(row), here);
  }
  (void)width;
}

}  // namespace

HCone hcone_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  const std::size_t dim = count_field(j, "dim", where);
  HCone c(dim);
  auto add = [&](bool eq) {
    return [&, eq](Vec row, const std::string& here) {
      if (row.size() == dim + 1) {
        if (!row.back().is_zero()) schema(here, "cone rows must have zero right-hand side");
        row.pop_back();
      }
      if (row.size() != dim) schema(here, "row length does not match dim " + std::to_string(dim));
      if (eq) {
        c.add_eq(std::move(row));
      } else {
        c.add_ineq(std::move(row));
      }
    };
  };
  read_rows(j, "ineq", dim, where, add(false));
  read_rows(j, "eq", dim, where, add(true));
  return c;
}

PolySet polyset_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  const std::size_t dim = count_field(j, "dim", where);
  PolySet P(dim);
  auto add = [&](bool eq) {
    return [&, eq](Vec row, const std::string& here) {
      if (row.size() != dim + 1) schema(here, "row must have dim + 1 = " + std::to_string(dim + 1) + " entries");
      Rational rhs = row.back();
      row.pop_back();
      if (eq) {
        P.add_eq(std::move(row), rhs);
      } else {
        P.add_le(std::move(row), rhs);
      }
    };
  };
  read_rows(j, "ineq", dim, where, add(false));
  read_rows(j, "eq", dim, where, add(true));
  return P;
}

VarSystem system_from_json(const json& j) {
  if (!j.is_object()) schema("problem", "expected a JSON object");
  for (const char* key : {"dims", "f", "g", "D", "refpoint"}) {
    if (!j.contains(key)) schema("problem", std::string("missing field '") + key + "'");
  }
  VarSystem sys;
  sys.l = count_field(j["dims"], "l", "dims");
  sys.n = count_field(j["dims"], "n", "dims");
  sys.s = count_field(j["dims"], "s", "dims");
  sys.f = func_from_json(j["f"], sys.l, sys.n, sys.n, false, "f");
  sys.g = func_from_json(j["g"], sys.l, sys.n, sys.s, true, "g");
  sys.D = polyset_from_json(j["D"], "D");
  if (sys.D.dim != sys.s) schema("D.dim", "must equal dims.s");
  const json& ref = j["refpoint"];
  if (!ref.is_object() || !ref.contains("p") || !ref.contains("x")) schema("refpoint", "expected {\"p\": [...], \"x\": [...]}");
  sys.pbar = vec_from_json(ref["p"], "refpoint.p");
  sys.xbar = vec_from_json(ref["x"], "refpoint.x");
  if (sys.pbar.size() != sys.l) schema("refpoint.p", "expected " + std::to_string(sys.l) + " entries");
  if (sys.xbar.size() != sys.n) schema("refpoint.x", "expected " + std::to_string(sys.n) + " entries");
  if (j.contains("P_tangent") && !j["P_tangent"].is_null()) {
    sys.TP = hcone_from_json(j["P_tangent"], "P_tangent");
    if (sys.TP->dim != sys.l) schema("P_tangent.dim", "must equal dims.l");
  }
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return sys;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

VarSystem parse_system(const std::string& text) { return system_from_json(parse_json_text(text)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VarSystem load_system(const std::string& path) { return parse_system(read_file(path)); }

Vec parse_direction(const std::string& text) {
  Vec v;
  std::string token;
  auto flush = [&] {
    std::size_t a = token.find_first_not_of(" \t");
    if (a == std::string::npos) {
      token.clear();
      return;
    }
    try {
      v.push_back(Rational::parse(token));
    } catch (const std::invalid_argument& e) {
      throw ParseError("direction '" + text + "': " + e.what());
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ';' || ch == ',') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return v;
}

std::pair<Vec, Vec> parse_qu(const std::string& text, std::size_t l, std::size_t n) {
  const Vec v = parse_direction(text);
  if (v.size() != l + n) {
    throw SchemaError("direction '" + text + "' must have " + std::to_string(l + n) + " entries (q then u)");
  }
  return {slice(v, 0, l), slice(v, l, n)};
}

}  // namespace varstab
