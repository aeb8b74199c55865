#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "aybe/bd.hpp"
#include "aybe/bundles.hpp"
#include "aybe/json_io.hpp"
#include "aybe/rmatrix.hpp"
#include "aybe/verify.hpp"

namespace aybe::cli {

namespace {

struct Common {
  std::uint64_t seed = 1;
  int samples = 32;
  double tol = -1.0;  // negative: suite default
  std::string out;
  std::string format = "json";
  bool use_stdin = false;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string> kSuites = {"aybe",         "unitarity", "qybe", "qybe-unitarity", "s-identity",
                                          "cubic",        "cybe",      "aybe2", "abc",           "symmetry",
                                          "h-equation",   "quasi-period", "r0-r1"};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--samples", c.samples, "number of sample points")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol, "residual tolerance (suite default when omitted)");
  sub->add_option("--out", c.out, "write output to this file");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--stdin", c.use_stdin, "read the structure or matrix JSON from stdin");
}

SamplePlan plan_of(const Common& c) {
  SamplePlan p;
  p.seed = c.seed;
  p.count = c.samples;
  return p;
}

json read_input(const Common& c, const std::string& path, const char* what, std::istream& in) {
  std::stringstream buf;
  if (c.use_stdin) {
    buf << in.rdbuf();
  } else {
    if (path.empty()) throw UsageError(std::string("missing --") + what + " (or --stdin)");
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    buf << f.rdbuf();
  }
  return parse_json(buf.str());
}

cplx parse_complex(const std::string& s) {
  auto comma = s.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse complex number '" + s + "' (expected re or re,im)");
  }
}

// Test hook: adds eps (1 + v^2) E with E = e_11 (x) e_12 (e_11 (x) e_11 when N = 1).
Tensor2 perturbation(int n) {
  Tensor2 e(n);
  e.add(0, 0, 0, n > 1 ? 1 : 0, 1.0);
  return e;
}

RFun perturb(const RFun& r, double eps) {
  if (eps == 0.0) return r;
  RFun p = r;
  Tensor2 e = perturbation(r.n);
  auto base = r.fn;
  p.fn = [base, e, eps](cplx u, cplx v) { return base(u, v) + (eps * (1.0 + v * v)) * e; };
  return p;
}

MFun perturb(const MFun& r, double eps) {
  if (eps == 0.0) return r;
  MFun p = r;
  Tensor2 e = perturbation(r.n);
  auto base = r.fn;
  p.fn = [base, e, eps](cplx x, cplx y, cplx y2) { return base(x, y, y2) + (eps * (1.0 + x)) * e; };
  return p;
}

std::optional<OrderedBD> pick_order(const StructureDoc& doc) {
  if (doc.alpha0) {
    OrderedBD obd = make_ordered(doc.bd, *doc.alpha0);
    if (!alpha0_outside_gamma2(obd)) throw PreconditionError("alpha0 lies in gamma2");
    return obd;
  }
  for (int m = 0; m < doc.bd.n; ++m) {
    OrderedBD obd = ordered_from_min(doc.bd, m);
    if (alpha0_outside_gamma2(obd)) return obd;
  }
  return std::nullopt;
}

std::optional<int> pick_symmetry_point(const AssocBD& bd) {
  for (int i = 0; i < bd.n; ++i)
    if (schedler_precondition(bd, i)) return i;
  return std::nullopt;
}

double tol_or(const Common& c, double fallback) { return c.tol >= 0.0 ? c.tol : fallback; }

// Runs one suite on one structure; nullopt when the suite does not apply.
std::optional<Report> run_one(const std::string& suite, const StructureDoc& doc, const Common& c, double eps) {
  const SamplePlan plan = plan_of(c);
  const AssocBD& bd = doc.bd;
  if (suite == "aybe") return residual_aybe(perturb(trig_r(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "unitarity") return residual_unitarity(perturb(trig_r(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "qybe") return residual_qybe(perturb(quantum_R(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "qybe-unitarity")
    return residual_qybe_unitarity(perturb(quantum_R(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "s-identity") return residual_s_identity(perturb(trig_r(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "cubic") return residual_cubic(perturb(trig_r(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "cybe") return residual_cybe(perturb(classical_r0(bd), eps), plan, tol_or(c, kClosedFormTol));
  if (suite == "r0-r1") return residual_r0_r1(perturb(trig_r(bd), eps), plan, tol_or(c, kExtractionTol));
  if (suite == "quasi-period")
    return residual_quasi_period(perturb(trig_r(bd), eps), quasi_period_twist(bd), plan, tol_or(c, 1e-10));
  if (suite == "symmetry") {
    auto i0 = pick_symmetry_point(bd);
    if (!i0) return std::nullopt;
    return residual_symmetry(perturb(trig_r(bd), eps), schedler_symmetry(bd, *i0), plan, tol_or(c, kClosedFormTol));
  }
  if (suite == "aybe2" || suite == "abc") {
    auto obd = pick_order(doc);
    if (!obd) return std::nullopt;
    if (suite == "aybe2") return residual_aybe2(perturb(r_multiplicative(*obd), eps), plan, tol_or(c, kClosedFormTol));
    const Tensor2 e = perturbation(bd.n);
    auto parts = [o = *obd, e, eps](cplx x) {
      ABCParts p = abc_parts(o, x);
      if (eps != 0.0) p.a += (eps * (1.0 + x)) * e;
      return p;
    };
    return residual_abc(bd.n, parts, plan, tol_or(c, kClosedFormTol));
  }
  throw UsageError("unknown suite '" + suite + "'");
}

std::vector<Report> run_h_equation(const Common& c, double eps) {
  std::vector<Report> out;
  for (HFunction h : {h_inverse_v(), h_half_coth_shifted()}) {
    if (eps != 0.0) {
      auto base = h.h;
      h.h = [base, eps](cplx v) { return base(v) + eps; };
    }
    out.push_back(residual_h_equation(h, plan_of(c), tol_or(c, 1e-10)));
  }
  return out;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

std::string report_line(const Report& r, const std::string& label) {
  std::ostringstream s;
  s << (r.pass ? "PASS " : "FAIL ") << r.suite;
  if (!label.empty()) s << " [" << label << "]";
  s << " max_residual=" << r.max_residual << " tol=" << r.tol << " samples=" << r.residuals.size() << "\n";
  return s.str();
}

int cmd_enumerate(int n, bool ordered, const Common& c, std::ostream& out) {
  json arr = json::array();
  std::ostringstream text;
  if (ordered) {
    for (const OrderedBD& o : enumerate_ordered(n)) {
      arr.push_back(to_json(o));
      text << describe(o.bd) << " alpha0=(" << o.alpha0.first + 1 << "," << o.alpha0.second + 1 << ")\n";
    }
  } else {
    for (const AssocBD& bd : enumerate(n)) {
      arr.push_back(to_json(bd));
      text << describe(bd) << "\n";
    }
  }
  emit(c, c.format == "json" ? arr.dump(2) + "\n" : text.str(), out);
  return kExitPass;
}

int cmd_eval(const std::string& family, const std::string& path, const std::map<std::string, std::string>& at,
             int rational_n, const Common& c, std::istream& in, std::ostream& out) {
  auto arg = [&](const char* k) { return parse_complex(at.at(k)); };
  Tensor2 t(1);
  if (family == "rational") {
    if (rational_n < 1) throw UsageError("rational family needs --n >= 1");
    t = rational_r(rational_n)(arg("u"), arg("v"));
  } else {
    StructureDoc doc = structure_from_json(read_input(c, path, "structure", in));
    if (family == "trig") {
      t = trig_r(doc.bd)(arg("u"), arg("v"));
    } else if (family == "quantum") {
      t = quantum_R(doc.bd)(arg("u"), arg("v"));
    } else if (family == "classical") {
      t = classical_r0(doc.bd)(0.0, arg("v"));
    } else if (family == "multiplicative") {
      auto obd = pick_order(doc);
      if (!obd) throw PreconditionError("no compatible order with alpha0 outside gamma2");
      t = r_multiplicative(*obd)(arg("x"), arg("y"), arg("y2"));
    } else {
      throw UsageError("unknown family '" + family + "'");
    }
  }
  json j = to_json(t, 0.0);
  j["family"] = family;
  if (c.format == "json") {
    emit(c, j.dump(2) + "\n", out);
  } else {
    std::ostringstream s;
    for (const auto& term : j["terms"])
      s << "e" << term[0] << term[1] << " (x) e" << term[2] << term[3] << " : " << term[4][0].get<double>() << " + "
        << term[4][1].get<double>() << "i\n";
    emit(c, s.str(), out);
  }
  return kExitPass;
}

int cmd_verify(const std::string& suite, const std::string& path, double eps, const Common& c, std::istream& in,
               std::ostream& out, std::ostream& err) {
  if (suite != "all" && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw UsageError("unknown suite '" + suite + "'");
  const std::vector<std::string> suites = suite == "all" ? kSuites : std::vector<std::string>{suite};
  std::vector<StructureDoc> corpus;
  const bool given = c.use_stdin || !path.empty();
  if (given) {
    corpus.push_back(structure_from_json(read_input(c, path, "structure", in)));
  } else {
    for (int n = 1; n <= 4; ++n)
      for (const AssocBD& bd : enumerate(n)) corpus.push_back({bd, std::nullopt});
  }
  json arr = json::array();
  std::string text;
  bool all_pass = true;
  int skipped = 0;
  for (const std::string& s : suites) {
    if (s == "h-equation") {
      for (const Report& r : run_h_equation(c, eps)) {
        arr.push_back(to_json(r));
        text += report_line(r, "");
        all_pass = all_pass && r.pass;
      }
      continue;
    }
    for (const StructureDoc& doc : corpus) {
      auto r = run_one(s, doc, c, eps);
      if (!r) {
        ++skipped;
        if (given && suite != "all") throw PreconditionError("suite '" + s + "' does not apply to this structure");
        continue;
      }
      json j = to_json(*r);
      const std::string label = describe(doc.bd);
      if (!given) j["structure"] = label;
      arr.push_back(j);
      text += report_line(*r, given ? "" : label);
      all_pass = all_pass && r->pass;
    }
  }
  if (skipped) err << "note: " << skipped << " suite/structure combinations do not apply and were skipped\n";
  const json body = arr.size() == 1 ? arr[0] : arr;
  emit(c, c.format == "json" ? body.dump(2) + "\n" : text, out);
  return all_pass ? kExitPass : kExitFail;
}

json edges_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (const Edge& e : edges) a.push_back({e.first + 1, e.second + 1});
  return a;
}

int cmd_bundle_check(const std::string& path, const Common& c, std::istream& in, std::ostream& out) {
  SplittingMatrix m = splitting_from_json(read_input(c, path, "matrix", in));
  Simplicity s = is_simple(m);
  json j;
  j["simple"] = s.simple;
  std::ostringstream text;
  text << (s.simple ? "simple" : "not simple") << "\n";
  if (!s.simple) {
    j["violation"] = {{"rows", {s.i + 1, s.i2 + 1}}, {"condition", std::string(1, s.condition)}, {"message", s.message}};
    text << s.message << "\n";
  } else {
    auto pos = star_order(m);
    json order = json::array();
    std::vector<int> at(m.rows);
    for (int i = 0; i < m.rows; ++i) at[pos[i]] = i;
    for (int i : at) order.push_back(i + 1);
    j["order"] = order;
    std::vector<Edge> tau_dom, tau_img;
    for (int i = 0; i < m.rows; ++i)
      for (int ip = 0; ip < m.rows; ++ip)
        if (auto t = tau_matrix(m, {i, ip})) {
          tau_dom.push_back({i, ip});
          tau_img.push_back(*t);
        }
    j["tau"] = {{"domain", edges_json(tau_dom)}, {"image", edges_json(tau_img)}};
    text << "order:";
    for (int i : at) text << " " << i + 1;
    text << "\ntau pairs: " << tau_dom.size() << "\n";
  }
  j["hom_dim"] = {{"x=1", hom_dim(m, 1.0)}, {"x=2", hom_dim(m, 2.0)}};
  text << "hom_dim(x=1)=" << hom_dim(m, 1.0) << " hom_dim(x=2)=" << hom_dim(m, 2.0) << "\n";
  emit(c, c.format == "json" ? j.dump(2) + "\n" : text.str(), out);
  return s.simple ? kExitPass : kExitFail;
}

int cmd_bundle_bd(const std::string& path, const Common& c, std::istream& in, std::ostream& out) {
  SplittingMatrix m = splitting_from_json(read_input(c, path, "matrix", in));
  OrderedBD obd = bd_from_matrix(m);
  json j = to_json(obd);
  j["realizable"] = realizable(obd);
  std::ostringstream text;
  text << describe(obd.bd) << " alpha0=(" << obd.alpha0.first + 1 << "," << obd.alpha0.second + 1 << ")\n";
  emit(c, c.format == "json" ? j.dump(2) + "\n" : text.str(), out);
  return kExitPass;
}

int cmd_oracle_compare(const std::string& path, int trials, double eps, const Common& c, std::istream& in,
                       std::ostream& out) {
  SplittingMatrix m = splitting_from_json(read_input(c, path, "matrix", in));
  OrderedBD obd = bd_from_matrix(m);
  MFun rm = r_multiplicative(obd);
  SamplePlan plan = plan_of(c);
  plan.count = trials;
  const int n = m.rows;
  auto accept = [&](const std::vector<cplx>& p) {
    cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
    return std::abs(std::pow(x, n) - 1.0) > plan.guard && std::abs(y - y2) > plan.guard;
  };
  auto closed = [&](cplx x, cplx y, cplx y2) {
    MasseyMap t = massey_closed(m, x, y, y2);
    if (eps != 0.0) t(0, 0) += eps;
    return t;
  };
  Report maps = run_suite("oracle-compare", plan, tol_or(c, 1e-9), 3, accept, [&](const std::vector<cplx>& p) {
    cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
    return max_abs(Mat(massey_oracle(m, x, y, y2) - closed(x, y, y2)));
  });
  Report tensor = run_suite("massey-tensor", plan, tol_or(c, 1e-10), 3, accept, [&](const std::vector<cplx>& p) {
    cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
    return max_abs(massey_assemble(closed(x, y, y2)) - rm(x, y, y2));
  });
  json arr = json::array({to_json(maps), to_json(tensor)});
  emit(c, c.format == "json" ? arr.dump(2) + "\n" : report_line(maps, "") + report_line(tensor, ""), out);
  return maps.pass && tensor.pass ? kExitPass : kExitFail;
}

int cmd_report(const std::vector<std::string>& files, const Common& c, std::istream& in, std::ostream& out) {
  std::vector<json> docs;
  if (c.use_stdin) {
    std::stringstream buf;
    buf << in.rdbuf();
    docs.push_back(parse_json(buf.str()));
  }
  for (const std::string& f : files) {
    std::ifstream s(f);
    if (!s) throw UsageError("cannot read " + f);
    std::stringstream buf;
    buf << s.rdbuf();
    docs.push_back(parse_json(buf.str()));
  }
  if (docs.empty()) throw UsageError("report needs report files or --stdin");
  int total = 0, failed = 0;
  double worst = 0.0;
  json failures = json::array();
  auto take = [&](const json& r) {
    if (!r.is_object() || !r.contains("suite") || !r.contains("pass") || !r["pass"].is_boolean())
      throw JsonInputError("report entries need \"suite\" and boolean \"pass\"");
    ++total;
    if (!r["pass"].get<bool>()) {
      ++failed;
      failures.push_back(r["suite"]);
    }
    if (r.contains("max_residual") && r["max_residual"].is_number())
      worst = std::max(worst, r["max_residual"].get<double>());
  };
  for (const json& d : docs) {
    if (d.is_array())
      for (const json& r : d) take(r);
    else
      take(d);
  }
  json j = {{"reports", total}, {"failed", failed}, {"failures", failures}, {"max_residual", worst},
            {"pass", failed == 0}};
  std::ostringstream text;
  text << total << " reports, " << failed << " failed, max_residual=" << worst << "\n";
  emit(c, c.format == "json" ? j.dump(2) + "\n" : text.str(), out);
  return failed == 0 ? kExitPass : kExitFail;
}

void diagnostic(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Associative Yang-Baxter solutions: enumeration, evaluation and verification", "aybe-cli"};
  app.require_subcommand(1, 1);

  Common c;
  int enum_n = 0;
  bool ordered = false;
  auto* en = app.add_subcommand("enumerate", "list structures with c0 the standard cycle");
  en->add_option("--n", enum_n, "size of the set")->required()->check(CLI::Range(1, 5));
  en->add_flag("--ordered", ordered, "list (structure, alpha0) pairs with alpha0 outside gamma2");

  std::string family = "trig", structure, matrix;
  std::map<std::string, std::string> at = {{"u", "0.3,0.2"}, {"v", "0.7,-0.4"}, {"x", "1.3,0.2"},
                                           {"y", "0.8,0.5"}, {"y2", "1.1,-0.6"}};
  int rational_n = 0;
  auto* ev = app.add_subcommand("eval", "evaluate an r-matrix at one point");
  ev->add_option("--family", family, "trig|quantum|classical|multiplicative|rational")
      ->check(CLI::IsMember({"trig", "quantum", "classical", "multiplicative", "rational"}));
  ev->add_option("--structure", structure, "structure JSON file");
  for (const char* k : {"u", "v", "x", "y", "y2"})
    ev->add_option(std::string("--") + k, at[k], "complex value as re or re,im");
  ev->add_option("--n", rational_n, "matrix size for the rational family");

  std::string suite = "all";
  double eps = 0.0;
  auto* ve = app.add_subcommand("verify", "run residual suites");
  std::vector<std::string> choices = kSuites;
  choices.push_back("all");
  ve->add_option("--suite", suite, "suite name or all")->check(CLI::IsMember(choices));
  ve->add_option("--structure", structure, "structure JSON file (default: all structures with N <= 4)");
  ve->add_option("--perturb", eps, "add a fixed perturbation of this size (harness self-test)");

  auto* bc = app.add_subcommand("bundle-check", "simplicity, order and tau of a splitting matrix");
  bc->add_option("--matrix", matrix, "splitting matrix JSON file");
  auto* bb = app.add_subcommand("bundle-bd", "structure derived from a simple splitting matrix");
  bb->add_option("--matrix", matrix, "splitting matrix JSON file");

  int trials = 16;
  auto* oc = app.add_subcommand("oracle-compare", "closed-form Massey map against the linear-solve oracle");
  oc->add_option("--matrix", matrix, "splitting matrix JSON file");
  oc->add_option("--trials", trials, "number of guarded parameter triples")->check(CLI::PositiveNumber);
  oc->add_option("--perturb", eps, "add a fixed perturbation of this size (harness self-test)");

  std::vector<std::string> files;
  auto* rp = app.add_subcommand("report", "aggregate report JSON files");
  rp->add_option("files", files, "report files");

  for (CLI::App* sub : {en, ev, ve, bc, bb, oc, rp}) add_common(sub, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (en->parsed()) return cmd_enumerate(enum_n, ordered, c, out);
    if (ev->parsed()) return cmd_eval(family, structure, at, rational_n, c, in, out);
    if (ve->parsed()) return cmd_verify(suite, structure, eps, c, in, out, err);
    if (bc->parsed()) return cmd_bundle_check(matrix, c, in, out);
    if (bb->parsed()) return cmd_bundle_bd(matrix, c, in, out);
    if (oc->parsed()) return cmd_oracle_compare(matrix, trials, eps, c, in, out);
    if (rp->parsed()) return cmd_report(files, c, in, out);
  } catch (const UsageError& e) {
    diagnostic(err, "usage", e.what());
  } catch (const JsonInputError& e) {
    diagnostic(err, "input", e.what());
  } catch (const BDError& e) {
    diagnostic(err, "structure", e.what());
  } catch (const NotSimple& e) {
    diagnostic(err, "not-simple", e.what());
  } catch (const SingularSystem& e) {
    diagnostic(err, "singular-system", e.what());
  } catch (const PoleError& e) {
    diagnostic(err, "pole", e.what());
  } catch (const PreconditionError& e) {
    diagnostic(err, "precondition", e.what());
  } catch (const SamplerExhausted& e) {
    diagnostic(err, "sampler", e.what());
  } catch (const std::exception& e) {
    diagnostic(err, "error", e.what());
  }
  return kExitUsage;
}

}  // namespace aybe::cli
