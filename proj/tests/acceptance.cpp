// One line per acceptance criterion; exit status 0 iff every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "aybe/bundles.hpp"
#include "aybe/json_io.hpp"
#include "aybe/rmatrix.hpp"
#include "aybe/verify.hpp"
#include "commands.hpp"

using namespace aybe;

namespace {

SamplePlan plan(int count, std::uint64_t seed = 1) {
  SamplePlan p;
  p.count = count;
  p.seed = seed;
  return p;
}

std::vector<AssocBD> corpus(int max_n) {
  std::vector<AssocBD> out;
  for (int n = 1; n <= max_n; ++n)
    for (const AssocBD& bd : enumerate(n)) out.push_back(bd);
  return out;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

// Accumulates the outcome of one criterion.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && ok_) first_failure_ = what;
    ok_ = ok_ && ok;
  }
  void residual(const std::string& name, double value, double tol) {
    check(value <= tol, name + " residual " + fmt(value) + " > " + fmt(tol));
    auto& w = worst_[name];
    w.first = std::max(w.first, value);
    w.second = tol;
  }
  void report(const Report& r, const std::string& name) {
    residual(name, std::isfinite(r.max_residual) ? r.max_residual : INFINITY, r.tol);
    check(r.pass, name + " report failed");
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool finish() const {
    std::ostringstream s;
    s << (ok_ ? "PASS" : "FAIL") << " criterion " << id_ << ": " << title_ << " (" << checks_ << " checks";
    for (const auto& [name, w] : worst_) s << "; " << name << " max=" << fmt(w.first) << " tol=" << fmt(w.second);
    for (const auto& n : notes_) s << "; " << n;
    s << ")";
    if (!ok_) s << " first failure: " << first_failure_;
    std::printf("%s\n", s.str().c_str());
    return ok_;
  }

  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
  int checks_ = 0;
  std::string first_failure_;
  std::map<std::string, std::pair<double, double>> worst_;
  std::vector<std::string> notes_;
};

template <typename F>
void guarded(Criterion& c, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.check(false, name + " threw: " + e.what());
  }
}

bool aybe_and_unitarity() {
  Criterion c(1, "AYBE and unitarity of trig_r, all structures N <= 4, 32 samples");
  guarded(c, "aybe", [&] {
    const auto start = std::chrono::steady_clock::now();
    auto all = corpus(4);
    for (const AssocBD& bd : all) {
      RFun r = trig_r(bd);
      c.report(residual_aybe(r, plan(32), 1e-8), "aybe");
      c.report(residual_unitarity(r, plan(32), 1e-8), "unitarity");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.check(secs < 120.0, "runtime " + std::to_string(secs) + " s");
    c.note(std::to_string(all.size()) + " structures in " + Criterion::fmt(secs) + " s");
  });
  return c.finish();
}

bool qybe() {
  Criterion c(2, "QYBE and quantum unitarity of quantum_R, all structures N <= 4");
  guarded(c, "qybe", [&] {
    for (const AssocBD& bd : corpus(4)) {
      RFun R = quantum_R(bd);
      c.report(residual_qybe(R, plan(32), 1e-8), "qybe");
      c.report(residual_qybe_unitarity(R, plan(32), 1e-8), "qybe-unitarity");
    }
  });
  return c.finish();
}

bool s_identity() {
  Criterion c(3, "s = r(u,v) r(-u,v) is scalar; nilpotent solutions give 1(x)1/v^2");
  guarded(c, "s", [&] {
    for (const AssocBD& bd : corpus(4)) c.report(residual_s_identity(trig_r(bd), plan(32), 1e-8), "s-identity");
    auto inv_v2 = [](cplx, cplx v) { return 1.0 / (v * v); };
    for (int n : {2, 3}) {
      Tensor2 omega = Tensor2::product(elementary(n, 0, n - 1), elementary(n, 0, n - 1));
      for (int degree : {1, 3})
        c.report(residual_s_identity(nilpotent_r(omega, degree), plan(32), 1e-10, inv_v2), "nilpotent-s");
    }
  });
  return c.finish();
}

bool multiplicative() {
  Criterion c(4, "multiplicative form for every ordered structure with alpha0 outside gamma2; difference form");
  guarded(c, "aybe2", [&] {
    int count = 0;
    for (int n = 1; n <= 4; ++n)
      for (const OrderedBD& o : enumerate_ordered(n)) {
        c.report(residual_aybe2(r_multiplicative(o), plan(32), 1e-8), "aybe2");
        DifferenceForm f = to_difference_form(o);
        RFun target = trig_r(inverse(o.bd));
        Report d = run_suite(
            "difference-form", plan(20), 1e-10, 4,
            [&](const std::vector<cplx>& p) { return target.clearance(p[0] - p[1], p[2] - p[3]) > 0.05; },
            [&](const std::vector<cplx>& p) {
              return max_abs(f(p[0], p[1], p[2], p[3]) + target(p[0] - p[1], p[2] - p[3]));
            });
        c.report(d, "difference-form");
        ++count;
      }
    c.note(std::to_string(count) + " ordered structures");
  });
  return c.finish();
}

SplittingMatrix random_matrix(std::mt19937_64& g, int n, int cols) {
  std::uniform_int_distribution<int> e(0, 1);
  std::vector<int> shifts;
  for (int k = 1; k < std::max(n, 2); ++k)
    if (n == 1 || std::gcd(k, n) == 1) shifts.push_back(k);
  std::vector<std::vector<int>> m(n, std::vector<int>(cols));
  for (auto& row : m)
    for (int& x : row) x = e(g);
  return make_splitting(m, shifts[std::uniform_int_distribution<std::size_t>(0, shifts.size() - 1)(g)]);
}

// The worked example, matrices built from sequences, and random simple 0/1
// matrices with N <= 3 and n <= 4.
std::vector<SplittingMatrix> simple_corpus() {
  std::vector<SplittingMatrix> out{make_splitting({{0, 0, 1}, {0, 0, 0}}, 1), matrix_from_sequence(2, 1, {1, 1}),
                                   matrix_from_sequence(3, 2, {1, 2, 3}), matrix_from_sequence(3, 2, {1, 1, 2}),
                                   matrix_from_sequence(3, 2, {1, 2, 2})};
  std::mt19937_64 g(2024);
  std::set<std::pair<int, std::vector<std::vector<int>>>> seen;
  while (out.size() < 30) {
    std::uniform_int_distribution<int> nd(1, 3), cd(1, 4);
    SplittingMatrix m = random_matrix(g, nd(g), cd(g));
    if (!is_simple(m).simple) continue;
    if (seen.insert({m.shift, m.m}).second) out.push_back(m);
  }
  return out;
}

bool oracle_equivalence() {
  Criterion c(5, "closed-form Massey map against the gluing oracle; tensor against r_multiplicative");
  guarded(c, "oracle", [&] {
    auto ms = simple_corpus();
    c.check(ms.size() >= 20, "corpus too small");
    for (const SplittingMatrix& m : ms) {
      const int n = m.rows;
      c.check(n <= 3 && m.cols <= 4, "corpus matrix too large");
      auto accept = [n](const std::vector<cplx>& p) {
        cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
        return std::abs(std::pow(x, n) - 1.0) > 0.05 && std::abs(y - y2) > 0.05;
      };
      MFun rm = r_multiplicative(bd_from_matrix(m));
      c.report(run_suite("oracle", plan(16), 1e-9, 3, accept,
                         [&](const std::vector<cplx>& p) {
                           cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
                           return max_abs(Mat(massey_oracle(m, x, y, y2) - massey_closed(m, x, y, y2)));
                         }),
               "oracle-vs-closed");
      c.report(run_suite("tensor", plan(16), 1e-10, 3, accept,
                         [&](const std::vector<cplx>& p) {
                           cplx x = std::exp(p[0]), y = std::exp(p[1]), y2 = std::exp(p[2]);
                           return max_abs(massey_tensor(m, x, y, y2) - rm(x, y, y2));
                         }),
               "tensor-vs-r_multiplicative");
    }
    c.note(std::to_string(ms.size()) + " simple matrices");
  });
  return c.finish();
}

bool round_trip() {
  Criterion c(6, "sequence round trip, row-sum invariant, endomorphisms at roots of unity");
  guarded(c, "round-trip", [&] {
    int trips = 0;
    for (int n = 2; n <= 5; ++n)
      for (const OrderedBD& o : enumerate_ordered(n)) {
        if (o.alpha0 != Edge{n - 1, 0}) continue;
        for (int k = (n + 1) / 2; k < n; ++k) {
          if (std::gcd(k, n) != 1 || !(o.bd.c0.pow(n - k) == o.bd.c)) continue;
          OrderedBD back = bd_from_matrix(matrix_from_sequence(n, k, sequence_for(o, k)));
          c.check(back.bd == o.bd && back.alpha0 == o.alpha0, "round trip of " + describe(o.bd));
          ++trips;
        }
      }
    c.check(trips >= 10, "fewer than 10 round trips");
    c.note(std::to_string(trips) + " round trips");
    auto ms = simple_corpus();
    for (const SplittingMatrix& m : ms) {
      auto pos = star_order(m);
      std::vector<int> t(m.rows);
      for (int i = 0; i < m.rows; ++i) t[i] = std::accumulate(m.m[i].begin(), m.m[i].end(), 0);
      for (int i = 0; i < m.rows; ++i)
        for (int ip = 0; ip < m.rows; ++ip) {
          if (pos[i] >= pos[ip]) continue;
          int ci = mod(i - m.shift, m.rows), cip = mod(ip - m.shift, m.rows);
          c.check(t[i] - t[ip] == (pos[ci] > pos[cip] ? -1 : 0), "row sums");
        }
      for (int s = 0; s < 8; ++s) {
        cplx root = std::polar(1.0, 2.0 * M_PI * s / m.rows);
        cplx other = std::polar(1.0 + 0.1 * (s + 1), 0.37 * s);
        c.check(hom_dim(m, root) == 1, "hom_dim at a root of unity");
        c.check(hom_dim(m, other) == 0, "hom_dim away from roots of unity");
      }
    }
  });
  return c.finish();
}

bool u_only_and_rational() {
  Criterion c(7, "phi_a solutions, diagonal closed form, rational_R");
  guarded(c, "phi", [&] {
    for (int n : {2, 3}) {
      MatA diag = MatA::Zero(n, n);
      for (int i = 0; i < n; ++i) diag(i, i) = cplx(0.3 * i, -0.2 * i * i);
      for (const MatA& a : {MatA(MatA::Zero(n, n)), diag, elementary(n, 0, 1)}) {
        RFun r = phi_a_r(a, cplx(1.1, -0.2));
        c.report(residual_aybe(r, plan(32), 1e-8), "phi-aybe");
        c.report(residual_unitarity(r, plan(32), 1e-8), "phi-unitarity");
      }
      RFun solved = phi_a_r(diag, cplx(0.9, 0.3)), closed = phi_diagonal_closed(diag, cplx(0.9, 0.3));
      c.report(run_suite(
                   "diagonal", plan(32), 1e-10, 1,
                   [&](const std::vector<cplx>& p) { return closed.clearance(p[0], 1.0) > 0.05; },
                   [&](const std::vector<cplx>& p) { return max_abs(solved(p[0], 0.0) - closed(p[0], 0.0)); }),
               "diagonal-closed-form");
      RFun R = rational_R(n, 1.0);
      c.report(residual_qybe(R, plan(32), 1e-8), "rational-qybe");
      c.report(residual_qybe_unitarity(R, plan(32), 1e-8), "rational-unitarity");
      for (cplx scale : {cplx(1.0), cplx(2.0, 0.5)}) {
        const cplx v(-0.52, 0.44);
        c.residual("rational-limit", max_abs(rational_R(n, scale)(1e6, v) - (1.0 / scale) * perm_P(n)), 1e-5);
      }
    }
  });
  return c.finish();
}

bool classical_limit() {
  Criterion c(8, "classical r-matrix: CYBE and numeric limit with second-order convergence");
  guarded(c, "classical", [&] {
    for (const AssocBD& bd : corpus(4)) c.report(residual_cybe(classical_r0(bd), plan(32), 1e-8), "cybe");
    double worst_ratio_gap = 0.0;
    for (const AssocBD& bd : corpus(3)) {
      RFun r = trig_r(bd), r0 = classical_r0(bd);
      for (cplx v : {cplx(-0.52, 0.44), cplx(0.8, 0.3)}) {
        double e1 = max_abs(project_sl(r0_numeric(r, 1e-4)(0.0, v), true, true) - r0(0.0, v));
        double e2 = max_abs(project_sl(r0_numeric(r, 5e-5)(0.0, v), true, true) - r0(0.0, v));
        c.residual("numeric-limit", e1, 1e-6);
        // Below this the difference is round-off and carries no rate.
        if (e1 > 1e-11) {
          worst_ratio_gap = std::max(worst_ratio_gap, std::abs(e1 / e2 - 4.0));
          c.check(std::abs(e1 / e2 - 4.0) < 0.5, "error ratio " + std::to_string(e1 / e2));
        }
      }
    }
    c.note("max |ratio - 4| = " + Criterion::fmt(worst_ratio_gap));
  });
  return c.finish();
}

bool auxiliary() {
  Criterion c(9, "cubic identity, Laurent coefficients, h-equation, chain-set order properties, quasi-period");
  guarded(c, "aux", [&] {
    for (const AssocBD& bd : corpus(3)) {
      RFun r = trig_r(bd);
      c.report(residual_cubic(r, plan(16), 1e-8), "cubic");
      c.report(residual_r0_r1(r, plan(16), 1e-5), "r0-r1");
    }
    for (const AssocBD& bd : corpus(4)) c.report(residual_quasi_period(bd, plan(16), 1e-10), "quasi-period");
    c.report(residual_h_equation(h_inverse_v(), plan(32), 1e-10), "h-inverse");
    c.report(residual_h_equation(h_half_coth_shifted(), plan(32), 1e-10), "h-half-coth-shifted");
    // The literal coth(v/2)/2 cannot pass: its residual is identically 1/4.
    Report blocked = residual_h_equation(h_half_coth(), plan(32), 1.0);
    double gap = 0.0;
    for (double x : blocked.residuals) gap = std::max(gap, std::abs(x - 0.25));
    c.check(gap < 1e-10, "coth(v/2)/2 residual is not the documented constant 1/4");
    c.note("BLOCKED h=coth(v/2)/2: residual " + Criterion::fmt(blocked.max_residual) +
           " (identically 1/4, deviation " + Criterion::fmt(gap) + "), see README");

    for (int n = 1; n <= 5; ++n)
      for (const OrderedBD& o : enumerate_ordered(n)) {
        auto pos = positions(o);
        std::vector<int> at(n);
        for (int i = 0; i < n; ++i) at[pos[i]] = i;
        auto cs = chain_sets(o.bd);
        for (const Edge& e : cs.p2) c.check(pos[e.first] < pos[e.second], "P2 edge against the order");
        for (const EdgeSet* p : {&cs.p1, &cs.p2})
          for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
              for (int d = b + 1; d < n; ++d) {
                int s = at[a], s1 = at[b], s2 = at[d];
                if (contains(*p, {s, s2})) c.check(contains(*p, {s, s1}) && contains(*p, {s1, s2}), "chain closure");
                if (contains(*p, {s1, s})) c.check(contains(*p, {s1, s2}) && contains(*p, {s2, s}), "chain closure");
                if (contains(*p, {s2, s1})) c.check(contains(*p, {s2, s}) && contains(*p, {s, s1}), "chain closure");
              }
        for (int k = 1; k <= nilpotency_depth(o.bd); ++k) {
          auto sc = signed_chain_sets(o, k);
          auto plus = [&](int a, int b) { return contains(sc.plus, {a, b}); };
          auto minus = [&](int a, int b) { return contains(sc.minus, {a, b}); };
          for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
              for (int i3 = 0; i3 < n; ++i3) {
                if (i1 == i2 || i2 == i3 || i1 == i3) continue;
                c.check((minus(i1, i3) && pos[i1] < pos[i2]) == (plus(i1, i2) && minus(i2, i3)), "triple criterion");
                c.check((minus(i1, i3) && pos[i2] < pos[i3]) == (minus(i1, i2) && plus(i2, i3)), "triple criterion");
              }
          CyclicPerm ck = o.bd.c.pow(k);
          for (const Edge& e : sc.minus)
            for (int i = 0; i < n; ++i) {
              bool in1 = pos[i] < pos[e.first] && pos[ck(i)] > pos[ck(e.first)];
              bool in2 = pos[i] > pos[e.second] && pos[ck(i)] < pos[ck(e.second)];
              c.check(in1 != in2, "negative pair decomposition");
            }
        }
      }
  });
  return c.finish();
}

int cli_code(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out, err;
  return cli::run_cli(args, in, out, err);
}

bool harness_integrity() {
  Criterion c(10, "every CLI suite exits 1 under an injected perturbation");
  guarded(c, "cli", [&] {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "aybe_acceptance";
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
      fs::path p = dir / name;
      std::ofstream(p) << text;
      return p.string();
    };
    const std::string general =
        write("general.json", to_json(make_bd(CyclicPerm::standard(3), CyclicPerm::standard(3).pow(2), {{0, 1}})).dump());
    const std::string symmetric =
        write("symmetric.json", to_json(make_bd(CyclicPerm::standard(3), CyclicPerm::standard(3), {})).dump());
    const std::string matrix = write("matrix.json", R"({"N":2,"n":3,"k":1,"m":[[0,0,1],[0,0,0]]})");
    int suites = 0;
    for (const char* suite : {"aybe", "unitarity", "qybe", "qybe-unitarity", "s-identity", "cubic", "cybe", "aybe2",
                              "abc", "symmetry", "h-equation", "quasi-period", "r0-r1"}) {
      const std::string f = std::string(suite) == "symmetry" ? symmetric : general;
      std::vector<std::string> args = {"verify", "--suite", suite, "--structure", f, "--samples", "8"};
      c.check(cli_code(args) == cli::kExitPass, std::string(suite) + " fails without perturbation");
      args.insert(args.end(), {"--perturb", "1e-3"});
      c.check(cli_code(args) == cli::kExitFail, std::string(suite) + " misses the perturbation");
      ++suites;
    }
    c.check(cli_code({"oracle-compare", "--matrix", matrix}) == cli::kExitPass, "oracle-compare fails unperturbed");
    c.check(cli_code({"oracle-compare", "--matrix", matrix, "--perturb", "1e-3"}) == cli::kExitFail,
            "oracle-compare misses the perturbation");
    c.note(std::to_string(suites + 1) + " suites");
  });
  return c.finish();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto* criterion : {aybe_and_unitarity, qybe, s_identity, multiplicative, oracle_equivalence, round_trip,
                          u_only_and_rational, classical_limit, auxiliary, harness_integrity})
    ok = criterion() && ok;
  std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return ok ? 0 : 1;
}
