#include "aybe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace aybe {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Point = std::vector<cplx>;
using Args = std::vector<std::pair<cplx, cplx>>;

bool all_clear(const RFun& r, const Args& args, double guard) {
  if (!r.clearance) return true;
  for (auto [u, v] : args)
    if (!(r.clearance(u, v) > guard)) return false;
  return true;
}

double finite_or_inf(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::infinity(); }

Tensor3 commutator(const Tensor3& a, const Tensor3& b) { return a * b - b * a; }

}  // namespace

std::vector<std::vector<cplx>> sample_points(const SamplePlan& plan, int arity,
                                             const std::function<bool(const std::vector<cplx>&)>& accept) {
  std::mt19937_64 gen(plan.seed);
  std::uniform_real_distribution<double> re(plan.rect.re_lo, plan.rect.re_hi);
  std::uniform_real_distribution<double> im(plan.rect.im_lo, plan.rect.im_hi);
  std::vector<Point> out;
  out.reserve(plan.count);
  while (static_cast<int>(out.size()) < plan.count) {
    int rejects = 0;
    while (true) {
      Point p(arity);
      for (auto& z : p) {
        double a = re(gen);
        double b = im(gen);
        z = cplx(a, b);
      }
      if (accept(p)) {
        out.push_back(std::move(p));
        break;
      }
      if (++rejects >= plan.max_rejects)
        throw SamplerExhausted("sampler exhausted after " + std::to_string(rejects) + " rejections");
    }
  }
  return out;
}

Report run_suite(const std::string& name, const SamplePlan& plan, double tol, int arity,
                 const std::function<bool(const std::vector<cplx>&)>& accept,
                 const std::function<double(const std::vector<cplx>&)>& residual) {
  Report rep;
  rep.suite = name;
  rep.plan = plan;
  rep.tol = tol;
  for (const Point& p : sample_points(plan, arity, accept)) rep.residuals.push_back(finite_or_inf(residual(p)));
  rep.max_residual = rep.residuals.empty() ? 0.0 : *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.pass = rep.max_residual <= tol;
  return rep;
}

Tensor3 aybe_lhs(const RFun& r, cplx u, cplx up, cplx v, cplx vp) {
  return embed(r(-up, v), 1, 2) * embed(r(u + up, v + vp), 1, 3) -
         embed(r(u + up, vp), 2, 3) * embed(r(u, v), 1, 2) + embed(r(u, v + vp), 1, 3) * embed(r(up, vp), 2, 3);
}

Tensor3 aybe2_lhs(const MFun& r, cplx x, cplx xp, cplx y1, cplx y2, cplx y3) {
  return embed(r(1.0 / xp, y1, y2), 1, 2) * embed(r(x * xp, y1, y3), 1, 3) -
         embed(r(x * xp, y2, y3), 2, 3) * embed(r(x, y1, y2), 1, 2) +
         embed(r(x, y1, y3), 1, 3) * embed(r(xp, y2, y3), 2, 3);
}

Tensor3 aybe2_lhs(const std::function<Tensor2(cplx)>& r, cplx x, cplx xp) {
  return embed(r(1.0 / xp), 1, 2) * embed(r(x * xp), 1, 3) - embed(r(x * xp), 2, 3) * embed(r(x), 1, 2) +
         embed(r(x), 1, 3) * embed(r(xp), 2, 3);
}

Report residual_aybe(const RFun& r, const SamplePlan& plan, double tol) {
  auto args = [](const Point& p) {
    cplx u = p[0], up = p[1], v = p[2], vp = p[3];
    return Args{{-up, v}, {u + up, v + vp}, {u + up, vp}, {u, v}, {u, v + vp}, {up, vp}};
  };
  return run_suite(
      "aybe", plan, tol, 4, [&](const Point& p) { return all_clear(r, args(p), plan.guard); },
      [&](const Point& p) { return max_abs(aybe_lhs(r, p[0], p[1], p[2], p[3])); });
}

Report residual_unitarity(const RFun& r, const SamplePlan& plan, double tol) {
  return run_suite(
      "unitarity", plan, tol, 2,
      [&](const Point& p) { return all_clear(r, {{p[0], p[1]}, {-p[0], -p[1]}}, plan.guard); },
      [&](const Point& p) { return max_abs(swap_factors(r(-p[0], -p[1])) + r(p[0], p[1])); });
}

Report residual_qybe(const RFun& R, const SamplePlan& plan, double tol, std::optional<cplx> u_fixed) {
  auto u_of = [u_fixed](const Point& p) { return u_fixed ? *u_fixed : p[2]; };
  auto args = [&](const Point& p) {
    cplx u = u_of(p), v = p[0], vp = p[1];
    return Args{{u, v}, {u, v + vp}, {u, vp}};
  };
  return run_suite(
      "qybe", plan, tol, 3, [&](const Point& p) { return all_clear(R, args(p), plan.guard); },
      [&](const Point& p) {
        cplx u = u_of(p), v = p[0], vp = p[1];
        Tensor3 a = embed(R(u, v), 1, 2), b = embed(R(u, v + vp), 1, 3), c = embed(R(u, vp), 2, 3);
        return max_abs(a * b * c - c * b * a);
      });
}

Report residual_qybe_unitarity(const RFun& R, const SamplePlan& plan, double tol) {
  return run_suite(
      "qybe-unitarity", plan, tol, 2,
      [&](const Point& p) { return all_clear(R, {{p[0], p[1]}, {p[0], -p[1]}}, plan.guard); },
      [&](const Point& p) {
        return max_abs(R(p[0], p[1]) * swap_factors(R(p[0], -p[1])) - unit2(R.n));
      });
}

Report residual_cybe(const RFun& r0, const SamplePlan& plan, double tol) {
  auto args = [](const Point& p) { return Args{{0.0, p[0]}, {0.0, p[0] + p[1]}, {0.0, p[1]}}; };
  return run_suite(
      "cybe", plan, tol, 2, [&](const Point& p) { return all_clear(r0, args(p), plan.guard); },
      [&](const Point& p) {
        cplx v = p[0], vp = p[1];
        Tensor3 a = embed(r0(0.0, v), 1, 2), b = embed(r0(0.0, v + vp), 1, 3), c = embed(r0(0.0, vp), 2, 3);
        return max_abs(commutator(a, b) + commutator(a, c) + commutator(b, c));
      });
}

Report residual_aybe2(const MFun& r, const SamplePlan& plan, double tol) {
  auto clear = [&](cplx x, cplx y, cplx y2) { return !r.clearance || r.clearance(x, y, y2) > plan.guard; };
  auto vars = [](const Point& p) {
    std::vector<cplx> e(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) e[i] = std::exp(p[i]);
    return e;
  };
  return run_suite(
      "aybe2", plan, tol, 5,
      [&](const Point& p) {
        auto e = vars(p);
        cplx x = e[0], xp = e[1], y1 = e[2], y2 = e[3], y3 = e[4];
        return clear(1.0 / xp, y1, y2) && clear(x * xp, y1, y3) && clear(x * xp, y2, y3) && clear(x, y1, y2) &&
               clear(x, y1, y3) && clear(xp, y2, y3) && clear(1.0 / x, y2, y1);
      },
      [&](const Point& p) {
        auto e = vars(p);
        cplx x = e[0], xp = e[1], y1 = e[2], y2 = e[3], y3 = e[4];
        double eq = max_abs(aybe2_lhs(r, x, xp, y1, y2, y3));
        double un = max_abs(swap_factors(r(x, y1, y2)) + r(1.0 / x, y2, y1));
        return std::max(eq, un);
      });
}

Report residual_s_identity(const RFun& r, const SamplePlan& plan, double tol,
                           const std::function<cplx(cplx, cplx)>& scalar) {
  return run_suite(
      "s-identity", plan, tol, 2,
      [&](const Point& p) { return all_clear(r, {{p[0], p[1]}, {-p[0], p[1]}}, plan.guard); },
      [&](const Point& p) {
        Tensor2 s = r(p[0], p[1]) * r(-p[0], p[1]);
        return max_abs(s - scalar(p[0], p[1]) * unit2(r.n));
      });
}

Report residual_cubic(const RFun& r, const SamplePlan& plan, double tol) {
  auto args = [](const Point& p) {
    cplx u12 = p[0] - p[1], u23 = p[1] - p[2], u13 = p[0] - p[2];
    cplx v12 = p[3] - p[4], v23 = p[4] - p[5], v13 = p[3] - p[5];
    return Args{{u12, v12}, {u23, v13},  {u12, v23},  {u23, v23},  {u12, v13},
                {u23, v12}, {u13, v13},  {-u23, v23}, {-u12, v23}, {-u23, v12}, {-u12, v12}};
  };
  return run_suite(
      "cubic", plan, tol, 6, [&](const Point& p) { return all_clear(r, args(p), plan.guard); },
      [&](const Point& p) {
        cplx u12 = p[0] - p[1], u23 = p[1] - p[2], u13 = p[0] - p[2];
        cplx u21 = -u12, u32 = -u23;
        cplx v12 = p[3] - p[4], v23 = p[4] - p[5], v13 = p[3] - p[5];
        auto s = [&](cplx u, cplx v) { return r(u, v) * r(-u, v); };
        Tensor3 e1 = embed(r(u12, v12), 1, 2) * embed(r(u23, v13), 1, 3) * embed(r(u12, v23), 2, 3) -
                     embed(r(u23, v23), 2, 3) * embed(r(u12, v13), 1, 3) * embed(r(u23, v12), 1, 2);
        Tensor3 r13 = embed(r(u13, v13), 1, 3);
        Tensor3 e2 = embed(s(u23, v23), 2, 3) * r13 - r13 * embed(s(u21, v23), 2, 3);
        Tensor3 e3 = r13 * embed(s(u32, v12), 1, 2) - embed(s(u12, v12), 1, 2) * r13;
        return std::max(max_abs(e1 - e2), max_abs(e2 - e3));
      });
}

Report residual_abc(const OrderedBD& obd, const SamplePlan& plan, double tol) {
  return residual_abc(obd.bd.n, [&](cplx x) { return abc_parts(obd, x); }, plan, tol);
}

Report residual_abc(int n, const std::function<ABCParts(cplx)>& parts, const SamplePlan& plan, double tol) {
  auto xclear = [&](cplx x) { return std::abs(std::pow(x, n) - 1.0) > plan.guard; };
  const Tensor2 P = perm_P(n);
  return run_suite(
      "abc", plan, tol, 2,
      [&](const Point& p) {
        cplx x = std::exp(p[0]), xp = std::exp(p[1]);
        return xclear(x) && xclear(xp) && xclear(x * xp);
      },
      [&](const Point& p) {
        cplx x = std::exp(p[0]), xp = std::exp(p[1]);
        ABCParts px = parts(x), pxp = parts(xp), pxx = parts(x * xp), pinv = parts(1.0 / x), pinvp = parts(1.0 / xp);
        double res = 0.0;
        res = std::max(res, max_abs(swap_factors(pinv.a) + px.a - P));
        res = std::max(res, max_abs(swap_factors(pinv.b) - px.c));
        res = std::max(res, max_abs(aybe2_lhs([&](cplx z) { return parts(z).a; }, x, xp)));
        res = std::max(res, max_abs(embed(px.b, 1, 2) * embed(pxp.b, 1, 3)));
        res = std::max(res, max_abs(embed(px.b, 1, 3) * embed(pxp.b, 2, 3) -
                                    embed(pxp.b, 2, 1) * embed(pxx.b, 1, 3) - embed(pxx.b, 2, 3) * embed(px.b, 1, 2)));
        res = std::max(res, max_abs(embed(px.c, 1, 3) * embed(pxp.a, 2, 3) + embed(pinvp.a, 1, 2) * embed(pxx.c, 1, 3) -
                                    embed(pxx.c, 2, 3) * embed(px.a, 1, 2) + embed(px.a, 1, 3) * embed(pxp.c, 2, 3)));
        return res;
      });
}

HFunction h_inverse_v() {
  return {"inverse_v", [](cplx v) { return 1.0 / v; }, [](cplx v) { return -1.0 / (v * v); },
          [](cplx v) { return std::abs(v); }};
}

HFunction h_half_coth() {
  return {"half_coth", [](cplx v) { return 0.5 * std::cosh(v / 2.0) / std::sinh(v / 2.0); },
          [](cplx v) {
            cplx s = std::sinh(v / 2.0);
            return -1.0 / (4.0 * s * s);
          },
          [](cplx v) { return std::abs(std::exp(v) - 1.0); }};
}

HFunction h_half_coth_shifted() {
  HFunction base = h_half_coth();
  return {"half_coth_shifted", [h = base.h](cplx v) { return h(v) - v / 12.0; },
          [dh = base.dh](cplx v) { return dh(v) - 1.0 / 12.0; }, base.clearance};
}

Report residual_h_equation(const HFunction& h, const SamplePlan& plan, double tol) {
  return run_suite(
      "h-equation(" + h.name + ")", plan, tol, 3,
      [&](const Point& p) {
        return h.clearance(p[0] - p[1]) > plan.guard && h.clearance(p[1] - p[2]) > plan.guard &&
               h.clearance(p[2] - p[0]) > plan.guard;
      },
      [&](const Point& p) {
        cplx a = p[0] - p[1], b = p[1] - p[2], c = p[2] - p[0];
        cplx sum = h.h(a) + h.h(b) + h.h(c);
        return std::abs(sum * sum + h.dh(a) + h.dh(b) + h.dh(c));
      });
}

Report residual_symmetry(const RFun& r, const MatA& a, const SamplePlan& plan, double tol) {
  return run_suite(
      "symmetry", plan, tol, 2, [&](const Point& p) { return all_clear(r, {{p[0], p[1]}}, plan.guard); },
      [&](const Point& p) { return max_abs(sym_commutator(r(p[0], p[1]), a)); });
}

Report residual_r0_r1(const RFun& r, const SamplePlan& plan, double tol, double eps0, double eps1) {
  RFun r0 = r0_numeric(r, eps0), r1 = r1_numeric(r, eps1);
  auto args = [](const Point& p) { return Args{{0.0, p[0]}, {0.0, p[0] + p[1]}, {0.0, p[1]}}; };
  return run_suite(
      "r0-r1", plan, tol, 2,
      [&](const Point& p) { return all_clear(r0, args(p), plan.guard) && all_clear(r1, args(p), plan.guard); },
      [&](const Point& p) {
        cplx v = p[0], vp = p[1];
        Tensor3 lhs = embed(r0(0.0, v), 1, 2) * embed(r0(0.0, v + vp), 1, 3) -
                      embed(r0(0.0, vp), 2, 3) * embed(r0(0.0, v), 1, 2) +
                      embed(r0(0.0, v + vp), 1, 3) * embed(r0(0.0, vp), 2, 3);
        Tensor3 rhs = embed(r1(0.0, v), 1, 2) + embed(r1(0.0, v + vp), 1, 3) + embed(r1(0.0, vp), 2, 3);
        return max_abs(lhs - rhs);
      });
}

Report residual_quasi_period(const AssocBD& bd, const SamplePlan& plan, double tol) {
  return residual_quasi_period(trig_r(bd), quasi_period_twist(bd), plan, tol);
}

Report residual_quasi_period(const RFun& r, const MatA& d, const SamplePlan& plan, double tol) {
  const int n = r.n;
  const Mat left = Eigen::kroneckerProduct(d, Mat::Identity(n, n));
  const Mat right = Eigen::kroneckerProduct(MatA(d.inverse()), Mat::Identity(n, n));
  const cplx shift(0.0, kTwoPi);
  return run_suite(
      "quasi-period", plan, tol, 2, [&](const Point& p) { return all_clear(r, {{p[0], p[1]}}, plan.guard); },
      [&](const Point& p) {
        cplx u = p[0], v = p[1];
        Tensor2 base = r(u, v);
        double res = max_abs(r(u, v + shift).op_matrix() - left * base.op_matrix() * right);
        res = std::max(res, max_abs(r(u + double(n) * shift, v) - base));
        res = std::max(res, max_abs(r(u, v + double(n) * shift) - base));
        return res;
      });
}

}  // namespace aybe
