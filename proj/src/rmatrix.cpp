#include "aybe/rmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace aybe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_exp1(cplx z) { return std::abs(std::exp(z) - 1.0); }

struct Term {
  int p, q, r, s;
  int family;
  int k;
  int m;
};

// All (alpha, k, tau^k(alpha)) with tau^k defined, k >= 1.
struct TauChain {
  Edge alpha;
  int k;
  Edge image;
};

std::vector<TauChain> tau_chains(const AssocBD& bd) {
  const EdgeSet p1 = chains(bd.c0, bd.gamma1);
  std::vector<TauChain> out;
  for (const Edge& a : p1) {
    Edge e = a;
    int k = 0;
    while (contains(p1, e)) {
      e = {bd.c(e.first), bd.c(e.second)};
      ++k;
      out.push_back({a, k, e});
    }
  }
  return out;
}

MatA diag_exp(const MatA& d, cplx scale) {
  const int n = static_cast<int>(d.rows());
  MatA out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = std::exp(scale * d(i, i));
  return out;
}

bool is_diagonal(const MatA& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > 0) return false;
  return true;
}

}  // namespace

Tensor2 RFun::operator()(cplx u, cplx v) const {
  if (clearance && clearance(u, v) < kHardPoleDistance)
    throw PoleError(kind + ": evaluation point lies on a pole");
  return fn(u, v);
}

Tensor2 MFun::operator()(cplx x, cplx y, cplx y2) const {
  if (clearance && clearance(x, y, y2) < kHardPoleDistance)
    throw PoleError(kind + ": evaluation point lies on a pole");
  return fn(x, y, y2);
}

RFun trig_r(const AssocBD& bd) {
  validate(bd);
  const int n = bd.n;
  auto terms = std::make_shared<std::vector<Term>>();
  for (int i = 0; i < n; ++i) terms->push_back({i, i, i, i, 0, 0, 0});
  for (int k = 0; k < n; ++k) {
    const CyclicPerm ck = bd.c.pow(k);
    for (int i = 0; i < n; ++i) terms->push_back({ck(i), ck(i), i, i, 1, k, 0});
  }
  for (int i = 0; i < n; ++i)
    for (int m = 1; m < n; ++m) {
      int j = bd.c0.pow(m)(i);
      terms->push_back({i, j, j, i, 2, 0, m});
    }
  for (const TauChain& t : tau_chains(bd)) {
    auto [i, j] = t.alpha;
    auto [ip, jp] = t.image;
    int m = bd.c0.steps(i, j);
    terms->push_back({j, i, ip, jp, 3, t.k, m});
    terms->push_back({ip, jp, j, i, 4, t.k, m});
  }
  RFun f;
  f.n = n;
  f.kind = "trig";
  f.fn = [n, terms](cplx u, cplx v) {
    const double nn = n;
    const cplx pu = 1.0 / (std::exp(u) - 1.0), pv = 1.0 / (std::exp(v) - 1.0);
    const cplx p0 = 1.0 / (1.0 - std::exp(-v));
    Tensor2 out(n);
    for (const Term& t : *terms) {
      cplx w;
      switch (t.family) {
        case 0: w = p0; break;
        case 1: w = std::exp(double(t.k) * u / nn) * pu; break;
        case 2: w = std::exp(double(t.m) * v / nn) * pv; break;
        case 3: w = std::exp(-(double(t.k) * u + double(t.m) * v) / nn); break;
        default: w = -std::exp((double(t.k) * u + double(t.m) * v) / nn); break;
      }
      out.add(t.p, t.q, t.r, t.s, w);
    }
    return out;
  };
  f.clearance = [](cplx u, cplx v) { return std::min(dist_exp1(u), dist_exp1(v)); };
  return f;
}

RFun quantum_R(const AssocBD& bd) {
  RFun r = trig_r(bd);
  auto denom = [](cplx u, cplx v) {
    return 1.0 / (std::exp(u / 2.0) - std::exp(-u / 2.0)) + 1.0 / (std::exp(v / 2.0) - std::exp(-v / 2.0));
  };
  RFun f;
  f.n = r.n;
  f.kind = "quantum";
  f.fn = [r, denom](cplx u, cplx v) { return (1.0 / denom(u, v)) * r.fn(u, v); };
  f.clearance = [r, denom](cplx u, cplx v) { return std::min(r.clearance(u, v), std::abs(denom(u, v))); };
  return f;
}

namespace {

struct MultData {
  int n;
  std::vector<Term> diag;     // x^k (1 - x^N)^{-1}
  std::vector<Term> upper;    // constant 1
  std::vector<Term> a_plus;   // x^k
  std::vector<Term> a_minus;  // -x^{-k}
  std::vector<Term> b;        // x^k
  std::vector<Term> c;        // x^{-k}
};

std::shared_ptr<MultData> mult_data(const OrderedBD& obd) {
  const AssocBD& bd = obd.bd;
  validate(bd);
  if (!alpha0_outside_gamma2(obd)) throw PreconditionError("alpha0 must not lie in gamma2");
  const int n = bd.n;
  const auto pos = positions(obd);
  auto d = std::make_shared<MultData>();
  d->n = n;
  for (int k = 0; k < n; ++k) {
    const CyclicPerm ck = bd.c.pow(k);
    for (int i = 0; i < n; ++i) d->diag.push_back({i, i, ck(i), ck(i), 0, k, 0});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && pos[i] < pos[j]) d->upper.push_back({i, j, j, i, 0, 0, 0});
  for (const TauChain& t : tau_chains(bd)) {
    auto [i, j] = t.alpha;
    // tau^k(i, j) = (C^k i, C^k j); the tensor uses e_{C^k j, C^k i}.
    int ci = t.image.first, cj = t.image.second;
    if (is_positive(pos, t.alpha)) {
      d->a_plus.push_back({i, j, cj, ci, 0, t.k, 0});
      d->a_minus.push_back({cj, ci, i, j, 0, t.k, 0});
    } else {
      d->b.push_back({i, j, cj, ci, 0, t.k, 0});
      d->c.push_back({cj, ci, i, j, 0, t.k, 0});
    }
  }
  return d;
}

ABCParts eval_abc(const MultData& d, cplx x) {
  ABCParts out{Tensor2(d.n), Tensor2(d.n), Tensor2(d.n)};
  const cplx g = 1.0 / (1.0 - std::pow(x, d.n));
  for (const Term& t : d.diag) out.a.add(t.p, t.q, t.r, t.s, std::pow(x, t.k) * g);
  for (const Term& t : d.upper) out.a.add(t.p, t.q, t.r, t.s, 1.0);
  for (const Term& t : d.a_plus) out.a.add(t.p, t.q, t.r, t.s, std::pow(x, t.k));
  for (const Term& t : d.a_minus) out.a.add(t.p, t.q, t.r, t.s, -std::pow(x, -t.k));
  for (const Term& t : d.b) out.b.add(t.p, t.q, t.r, t.s, std::pow(x, t.k));
  for (const Term& t : d.c) out.c.add(t.p, t.q, t.r, t.s, std::pow(x, -t.k));
  return out;
}

double mult_clearance(int n, cplx x, cplx y, cplx y2) {
  return std::min({std::abs(std::pow(x, n) - 1.0), std::abs(y - y2), std::abs(x), std::abs(y), std::abs(y2)});
}

}  // namespace

MFun r_multiplicative(const OrderedBD& obd) {
  auto d = mult_data(obd);
  const int n = d->n;
  MFun f;
  f.n = n;
  f.kind = "multiplicative";
  f.fn = [d, n](cplx x, cplx y, cplx y2) {
    ABCParts p = eval_abc(*d, x);
    Tensor2 r = p.a + y * p.b - y2 * p.c;
    r += (y / (y2 - y)) * perm_P(n);
    return r;
  };
  f.clearance = [n](cplx x, cplx y, cplx y2) { return mult_clearance(n, x, y, y2); };
  return f;
}

ABCParts abc_parts(const OrderedBD& obd, cplx x) {
  auto d = mult_data(obd);
  if (std::abs(std::pow(x, d->n) - 1.0) < kHardPoleDistance || std::abs(x) < kHardPoleDistance)
    throw PoleError("abc_parts: x^N = 1 or x = 0");
  return eval_abc(*d, x);
}

DifferenceForm to_difference_form(const OrderedBD& obd) {
  MFun rm = r_multiplicative(obd);
  const auto pos = positions(obd);
  const int n = obd.bd.n;
  return [rm, pos, n](cplx u1, cplx u2, cplx v1, cplx v2) {
    Tensor2 r = rm(std::exp((u1 - u2) / double(n)), std::exp(v1), std::exp(v2));
    // Conjugation by phi(v1) (x) phi(v2), phi(v) e_j = e^{-pos(j) v/N} e_j,
    // multiplies e_pq (x) e_rs by e^{((pos q - pos p) v1 + (pos s - pos r) v2)/N}.
    Tensor2 out(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            cplx c = r.coeff(p, q, a, b);
            if (c == cplx(0.0)) continue;
            cplx w = std::exp((double(pos[q] - pos[p]) * v1 + double(pos[b] - pos[a]) * v2) / double(n));
            out.add(p, q, a, b, c * w);
          }
    return out;
  };
}

RFun gauge_family(const RFun& r, const GaugeParams& params) {
  const int n = r.n;
  MatA a = params.a.size() ? params.a : MatA(Mat::Zero(n, n));
  MatA b = params.b.size() ? params.b : MatA(Mat::Zero(n, n));
  if (a.rows() != n || b.rows() != n) throw SizeMismatch("gauge_family: symmetry size mismatch");
  if (!is_diagonal(a) || !is_diagonal(b)) throw PreconditionError("gauge_family: a and b must be diagonal");
  if (params.c == cplx(0.0) || params.c_prime == cplx(0.0))
    throw PreconditionError("gauge_family: c and c' must be nonzero");
  const cplx probes[3][2] = {{{0.37, 0.21}, {0.53, -0.44}}, {{-0.61, 0.12}, {0.29, 0.77}}, {{0.83, -0.35}, {-0.47, 0.18}}};
  for (const auto& pt : probes) {
    cplx u = pt[0], v = pt[1];
    if (r.clearance && r.clearance(u, v) < 1e-3) continue;
    Tensor2 val = r(u, v);
    double scale = 1.0 + max_abs(val);
    if (max_abs(sym_commutator(val, a)) > 1e-8 * scale || max_abs(sym_commutator(val, b)) > 1e-8 * scale)
      throw PreconditionError("gauge_family: a or b is not an infinitesimal symmetry");
  }
  RFun f;
  f.n = n;
  f.kind = "gauge(" + r.kind + ")";
  const GaugeParams p = params;
  f.fn = [r, p, a, b, n](cplx u, cplx v) {
    Tensor2 base = r.fn(p.c * u, p.c_prime * v);
    Mat id = Mat::Identity(n, n);
    Mat left = Eigen::kroneckerProduct(diag_exp(b, v), diag_exp(a, u));
    Mat right = Eigen::kroneckerProduct(diag_exp(a, -u) * diag_exp(b, -v), id);
    Mat op = p.c * std::exp(p.lambda * u * v) * (left * base.op_matrix() * right);
    return Tensor2::from_op(op);
  };
  f.clearance = [r, p](cplx u, cplx v) { return r.clearance ? r.clearance(p.c * u, p.c_prime * v) : kInf; };
  return f;
}

namespace {

// Matrix of cu id + ad_a on A in the basis e_ij -> index i*N + j.
Mat phi_operator(const MatA& a, cplx cu) {
  const int n = static_cast<int>(a.rows());
  Mat m = cu * Mat::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        m(k * n + j, i * n + j) += a(k, i);
        m(i * n + k, i * n + j) -= a(j, k);
      }
  return m;
}

double smallest_singular_value(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

RFun phi_a_r(const MatA& a, cplx c) {
  if (a.rows() != a.cols()) throw SizeMismatch("phi_a_r: a must be square");
  if (c == cplx(0.0)) throw PreconditionError("phi_a_r: c must be nonzero");
  const int n = static_cast<int>(a.rows());
  RFun f;
  f.n = n;
  f.kind = "phi_a";
  f.fn = [a, c, n](cplx u, cplx) {
    Mat op = phi_operator(a, c * u);
    if (smallest_singular_value(op) <= 1e-8) throw PoleError("phi_a_r: cu id + ad_a is singular");
    Eigen::PartialPivLU<Mat> lu(op);
    Tensor2 out(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        Vec rhs = Vec::Zero(n * n);
        rhs(p * n + q) = 1.0;
        Vec y = lu.solve(rhs);
        // phi(e_pq) (x) e_qp
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out.add(i, j, q, p, y(i * n + j));
      }
    return out;
  };
  f.clearance = [a, c](cplx u, cplx) { return smallest_singular_value(phi_operator(a, c * u)); };
  return f;
}

RFun phi_diagonal_closed(const MatA& a, cplx c) {
  const int n = static_cast<int>(a.rows());
  if (!is_diagonal(a)) throw PreconditionError("phi_diagonal_closed: a must be diagonal");
  RFun f;
  f.n = n;
  f.kind = "phi_a_diagonal";
  f.fn = [a, c, n](cplx u, cplx) {
    Tensor2 out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.add(i, j, j, i, 1.0 / (c * u + a(i, i) - a(j, j)));
    return out;
  };
  f.clearance = [a, c, n](cplx u, cplx) {
    double d = kInf;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d = std::min(d, std::abs(c * u + a(i, i) - a(j, j)));
    return d;
  };
  return f;
}

RFun nilpotent_r(const Tensor2& omega, int degree) {
  if (degree < 1) throw PreconditionError("nilpotent_r: degree must be >= 1");
  const int n = omega.n();
  const double sign = (degree - 1) % 2 == 0 ? 1.0 : -1.0;
  const double scale = 1.0 + max_abs(omega);
  if (max_abs(embed(omega, 1, 2) * embed(omega, 1, 3)) > 1e-10 * scale * scale)
    throw PreconditionError("nilpotent_r: omega^{12} omega^{13} != 0");
  if (max_abs(swap_factors(omega) - sign * omega) > 1e-10 * scale)
    throw PreconditionError("nilpotent_r: omega^{21} != (-1)^{n-1} omega");
  RFun f;
  f.n = n;
  f.kind = "nilpotent";
  const Tensor2 P = perm_P(n);
  f.fn = [omega, degree, P](cplx u, cplx v) { return (1.0 / std::pow(u, degree)) * omega + (1.0 / v) * P; };
  f.clearance = [](cplx u, cplx v) { return std::min(std::abs(u), std::abs(v)); };
  return f;
}

RFun rational_R(int n, cplx c) {
  if (c == cplx(0.0)) throw PreconditionError("rational_R: c must be nonzero");
  RFun f;
  f.n = n;
  f.kind = "rational_R";
  const Tensor2 one = unit2(n), P = perm_P(n);
  f.fn = [c, one, P](cplx u, cplx v) { return (1.0 / (1.0 + c * u / v)) * (one + (u / v) * P); };
  f.clearance = [c](cplx u, cplx v) { return std::min(std::abs(v), std::abs(v + c * u)); };
  return f;
}

RFun rational_r(int n) {
  RFun f;
  f.n = n;
  f.kind = "rational";
  const Tensor2 one = unit2(n), P = perm_P(n);
  f.fn = [one, P](cplx u, cplx v) { return (1.0 / u) * one + (1.0 / v) * P; };
  f.clearance = [](cplx u, cplx v) { return std::min(std::abs(u), std::abs(v)); };
  return f;
}

RFun classical_r0(const AssocBD& bd) {
  validate(bd);
  const int n = bd.n;
  Tensor2 t = 0.5 * project_sl(diag_P0(n), true, true);
  for (int k = 1; k < n; ++k) {
    const CyclicPerm ck = bd.c.pow(k);
    for (int i = 0; i < n; ++i) t.add(i, i, ck(i), ck(i), 0.5 - double(k) / n);
  }
  auto terms = std::make_shared<std::vector<Term>>();
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      int j = bd.c0.pow(m)(i);
      terms->push_back({i, j, j, i, 2, 0, m});
    }
  for (const TauChain& tc : tau_chains(bd)) {
    auto [i, j] = tc.alpha;
    auto [ip, jp] = tc.image;
    int m = bd.c0.steps(i, j);
    terms->push_back({j, i, ip, jp, 3, tc.k, m});
    terms->push_back({ip, jp, j, i, 4, tc.k, m});
  }
  RFun f;
  f.n = n;
  f.kind = "classical_r0";
  f.fn = [n, t, terms](cplx, cplx v) {
    Tensor2 geo(n), rest(n);
    const cplx pv = 1.0 / (std::exp(v) - 1.0);
    for (const Term& s : *terms) {
      const cplx e = std::exp(double(s.m) * v / double(n));
      if (s.family == 2) geo.add(s.p, s.q, s.r, s.s, e * pv);
      else if (s.family == 3) rest.add(s.p, s.q, s.r, s.s, 1.0 / e);
      else rest.add(s.p, s.q, s.r, s.s, -e);
    }
    return t + project_sl(geo, true, true) + rest;
  };
  f.clearance = [](cplx, cplx v) { return dist_exp1(v); };
  return f;
}

// The extraction removes the pole at u = 0, so only the v-direction counts;
// it is probed at u = 1, away from the u-poles.
namespace {
double v_clearance(const RFun& r, cplx v) { return r.clearance ? r.clearance(1.0, v) : kInf; }
}  // namespace

RFun r0_numeric(const RFun& r, double eps) {
  RFun f;
  f.n = r.n;
  f.kind = "r0(" + r.kind + ")";
  f.fn = [r, eps](cplx, cplx v) { return 0.5 * (r.fn(eps, v) + r.fn(-eps, v)); };
  f.clearance = [r](cplx, cplx v) { return v_clearance(r, v); };
  return f;
}

RFun r1_numeric(const RFun& r, double eps) {
  RFun f;
  f.n = r.n;
  f.kind = "r1(" + r.kind + ")";
  const Tensor2 one = unit2(r.n);
  f.fn = [r, eps, one](cplx, cplx v) {
    return (1.0 / (2.0 * eps)) * (r.fn(eps, v) - r.fn(-eps, v)) - (1.0 / (eps * eps)) * one;
  };
  f.clearance = [r](cplx, cplx v) { return v_clearance(r, v); };
  return f;
}

RFun s_product(const RFun& r) {
  RFun f;
  f.n = r.n;
  f.kind = "s(" + r.kind + ")";
  f.fn = [r](cplx u, cplx v) { return r.fn(u, v) * r.fn(-u, v); };
  f.clearance = [r](cplx u, cplx v) { return r.clearance ? std::min(r.clearance(u, v), r.clearance(-u, v)) : kInf; };
  return f;
}

cplx trig_s_scalar(cplx u, cplx v) {
  cplx sv = std::exp(v / 2.0) - std::exp(-v / 2.0);
  cplx su = std::exp(u / 2.0) - std::exp(-u / 2.0);
  return 1.0 / (sv * sv) - 1.0 / (su * su);
}

bool schedler_precondition(const AssocBD& bd, int i0) {
  return !contains(bd.gamma2, {bd.c0.inverse()(i0), i0}) && !contains(bd.gamma2, {i0, bd.c0(i0)});
}

MatA schedler_symmetry(const AssocBD& bd, int i0) {
  validate(bd);
  if (i0 < 0 || i0 >= bd.n) throw PreconditionError("schedler_symmetry: i0 out of range");
  if (!schedler_precondition(bd, i0))
    throw PreconditionError("schedler_symmetry: gamma2 contains an edge adjacent to i0");
  MatA a = Mat::Zero(bd.n, bd.n);
  for (int i = 0; i < bd.n; ++i) a(i, i) = double(bd.c.steps(i0, i)) / bd.n;
  return a;
}

MatA quasi_period_twist(const AssocBD& bd) {
  const int n = bd.n;
  MatA d = Mat::Zero(n, n);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int p = 0; p < n; ++p) d(p, p) = std::exp(cplx(0.0, -two_pi * bd.c0.steps(0, p) / n));
  return d;
}

}  // namespace aybe
