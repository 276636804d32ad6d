#include "varstab/cli.hpp"

#include <CLI11.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "varstab/checks.hpp"
#include "varstab/graphder.hpp"
#include "varstab/io.hpp"
#include "varstab/oracle.hpp"
#include "varstab/report.hpp"

namespace varstab {

namespace {

struct Options {
  std::string condition;
  std::string file;
  std::string direction;
  std::string element;
  std::string param;
  std::string grid;
  std::string radius = "1";
  bool relative = false;
  bool aubin = false;
  bool as_json = false;
};

const std::vector<std::string> kConditions = {"assumption1",       "robinson-cq",        "nondegeneracy", "socic",
                                              "isolated-calmness", "metric-regularity", "aubin"};

Vec parse_full(const std::string& text, std::size_t dim, const std::string& what) {
  const Vec v = parse_direction(text);
  if (v.size() != dim) {
    throw SchemaError(what + " '" + text + "' must have " + std::to_string(dim) + " entries");
  }
  return v;
}

int emit(const Verdict& v, const Options& o, std::ostream& out) {
  if (o.as_json) {
    out << to_json(v).dump(2) << "\n";
  } else {
    out << render_text(v);
  }
  return exit_code(v.status);
}

int do_check(const Options& o, std::ostream& out) {
  const VarSystem sys = load_system(o.file);
  const std::size_t m = sys.l + sys.n;
  const bool has_dir = !o.direction.empty();
  Verdict v;
  if (o.condition == "assumption1") {
    v = check_assumption1(sys);
  } else if (o.condition == "robinson-cq") {
    v = check_robinson_cq(sys);
  } else if (o.condition == "nondegeneracy") {
    v = check_nondegen_dir(sys, has_dir ? parse_full(o.direction, m, "direction (q;u)") : zeros(m));
  } else if (o.condition == "socic") {
    v = has_dir ? check_socic_dir(sys, parse_full(o.direction, sys.n, "direction u")) : check_socic(sys);
  } else if (o.condition == "isolated-calmness") {
    v = check_isolated_calmness(sys);
  } else if (o.condition == "metric-regularity") {
    v = check_metreg_M_dir(sys, has_dir ? parse_full(o.direction, m, "direction (q;u)") : zeros(m));
  } else {
    if (o.relative && !sys.TP) {
      throw SchemaError("--relative needs a \"P_tangent\" cone in the problem file");
    }
    v = o.relative ? check_rel_aubin(sys, *sys.TP) : check_rel_aubin(sys, HCone::whole(sys.l));
  }
  return emit(v, o, out);
}

int do_graphder(const Options& o, std::ostream& out) {
  const VarSystem sys = load_system(o.file);
  const Vec qu = parse_full(o.direction, sys.l + sys.n, "direction (q;u)");
  const Vec xstar = default_xstar(sys);
  const DerivSet d = dpsi(sys, xstar, qu);
  json report = {{"derivative", to_json(d)}};
  std::ostringstream text;
  text << "DPsi at x* = " << to_string(xstar) << " in direction (q,u) = " << to_string(qu) << "\n";
  text << "  w = " << to_string(d.w) << ", " << d.strata.size() << " multiplier strata\n";
  for (std::size_t k = 0; k < d.strata.size(); ++k) {
    const auto& st = d.strata[k];
    text << "  stratum " << k << ": face " << st.mult.face.J.str() << ", lambda ~ " << to_string(st.mult.rep)
         << ", cone generated by " << st.cone.rays.size() << " rays and " << st.cone.lines.size() << " lines\n";
  }
  int code = 0;
  if (!o.element.empty()) {
    const Vec vstar = parse_full(o.element, sys.n, "element");
    const auto wit = dpsi_member(d, vstar);
    report["member"] = wit.has_value();
    if (wit) {
      const Verdict dg = dg_lower_witness(sys, xstar, qu, wit->lambda, wit->eta);
      report["witness"] = {{"stratum", wit->stratum}, {"lambda", to_json(wit->lambda)}, {"eta", to_json(wit->eta)}};
      report["dg"] = to_json(dg);
      text << "element " << to_string(vstar) << " lies in DPsi: lambda = " << to_string(wit->lambda)
           << ", eta = " << to_string(wit->eta) << "\n";
      text << render_text(dg);
    } else {
      text << "element " << to_string(vstar) << " is not in DPsi\n";
      code = 1;
    }
  }
  if (o.as_json) {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return code;
}

int do_solve(const Options& o, std::ostream& out) {
  const VarSystem sys = load_system(o.file);
  const Vec p = parse_full(o.param, sys.l, "parameter");
  const SolutionPieces S = solve_solution_map(sys, p);
  if (o.as_json) {
    out << to_json(S).dump(2) << "\n";
    return 0;
  }
  out << "S(p) at p = " << to_string(p) << ": " << S.pieces.size() << " piece(s)\n";
  for (const auto& pc : S.pieces) {
    if (pc.point) {
      out << "  point " << to_string(*pc.point) << "\n";
    } else {
      out << "  polyhedron " << to_json(pc.x_set).dump() << "\n";
    }
  }
  return 0;
}

std::vector<Vec> load_grid(const std::string& path) {
  const json j = parse_json_text(read_file(path));
  if (!j.is_array()) throw SchemaError("grid file must hold a JSON array of parameter vectors");
  std::vector<Vec> grid;
  for (std::size_t i = 0; i < j.size(); ++i) grid.push_back(vec_from_json(j[i], "grid[" + std::to_string(i) + "]"));
  return grid;
}

int do_sample(const Options& o, std::ostream& out) {
  const VarSystem sys = load_system(o.file);
  const std::vector<Vec> grid = load_grid(o.grid);
  for (const auto& p : grid) {
    if (p.size() != sys.l) throw SchemaError("grid entry " + to_string(p) + " has wrong dimension");
  }
  Rational radius;
  try {
    radius = Rational::parse(o.radius);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("radius: ") + e.what());
  }
  json report;
  std::ostringstream text;
  if (o.aubin) {
    std::optional<HCone> TP;
    if (o.relative) {
      if (!sys.TP) throw SchemaError("--relative needs a \"P_tangent\" cone in the problem file");
      TP = sys.TP;
    }
    const RatioTable t = sample_aubin(sys, grid, TP, radius);
    report = to_json(t);
    text << "Aubin ratios: " << t.samples.size() << " samples, " << t.skipped << " grid points outside T_P\n";
    if (t.argmax) {
      const auto& s = t.samples[*t.argmax];
      text << "  max at p = " << to_string(s.p) << ", p' = " << to_string(s.p2) << ", x = " << to_string(s.x) << ": "
           << (s.infinite ? std::string("infinite (S(p') empty)") : "ratio^2 = " + s.ratio_sq.str()) << "\n";
    }
  } else {
    const CalmnessReport r = sample_calmness(sys, grid, radius);
    report = to_json(r);
    text << "calmness ratios: " << r.table.samples.size() << " samples, max ratio^2 = " << r.table.max_sq().str()
         << "\n";
    if (!r.reference_isolated) {
      text << "  S(pbar) is not isolated: it contains " << to_string(*r.reference_witness) << "\n";
    }
  }
  if (o.as_json) {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability checks for parameterized variational systems"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "decide a stability condition at the reference point");
  check->add_option("condition", o.condition, "condition to check")->required()->check(CLI::IsMember(kConditions));
  check->add_option("file", o.file, "problem file")->required();
  check->add_option("--direction", o.direction, "direction: u for socic, q;u otherwise");
  check->add_flag("--relative", o.relative, "aubin: relative to the P_tangent cone of the file");
  check->add_flag("--json", o.as_json, "JSON report");

  auto* gd = app.add_subcommand("graphder", "graphical derivative of the normal-cone map");
  gd->add_option("file", o.file, "problem file")->required();
  gd->add_option("--direction", o.direction, "direction q;u")->required();
  gd->add_option("--element", o.element, "test membership of this element");
  gd->add_flag("--json", o.as_json, "JSON report");

  auto* solve = app.add_subcommand("solve", "enumerate S(p) for an affine system");
  solve->add_option("file", o.file, "problem file")->required();
  solve->add_option("--param", o.param, "parameter p")->required();
  solve->add_flag("--json", o.as_json, "JSON report");

  auto* sample = app.add_subcommand("sample", "empirical calmness or Aubin ratios on a parameter grid");
  sample->add_option("file", o.file, "problem file")->required();
  sample->add_option("--grid", o.grid, "JSON file with a list of parameter vectors")->required();
  sample->add_flag("--aubin", o.aubin, "pairwise Aubin ratios instead of calmness ratios");
  sample->add_flag("--relative", o.relative, "with --aubin: keep grid points in pbar + P_tangent");
  sample->add_option("--radius", o.radius, "half-width of the box around xbar");
  sample->add_flag("--json", o.as_json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*check) return do_check(o, out);
    if (*gd) return do_graphder(o, out);
    if (*solve) return do_solve(o, out);
    return do_sample(o, out);
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitData;
  } catch (const OracleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace varstab
