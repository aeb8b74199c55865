#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aybe/bd.hpp"
#include "aybe/rmatrix.hpp"
#include "aybe/tensor.hpp"

namespace aybe {

struct Rect {
  double re_lo = -1.5, re_hi = 1.5;
  double im_lo = -1.5, im_hi = 1.5;
};

struct SamplePlan {
  std::uint64_t seed = 1;
  int count = 32;
  Rect rect;
  double guard = 0.05;
  int max_rejects = 10000;
};

struct Report {
  std::string suite;
  SamplePlan plan;
  std::vector<double> residuals;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

class SamplerExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kClosedFormTol = 1e-8;
inline constexpr double kExtractionTol = 1e-5;

// Draws `count` points of `arity` complex coordinates uniformly from the plan
// rectangle, rejecting points for which `accept` fails. Throws SamplerExhausted
// after plan.max_rejects consecutive rejections.
std::vector<std::vector<cplx>> sample_points(const SamplePlan& plan, int arity,
                                             const std::function<bool(const std::vector<cplx>&)>& accept);

// Runs `residual` over the sampled points; the residual is evaluated
// independently per point and aggregated with max.
Report run_suite(const std::string& name, const SamplePlan& plan, double tol, int arity,
                 const std::function<bool(const std::vector<cplx>&)>& accept,
                 const std::function<double(const std::vector<cplx>&)>& residual);

// Left-hand side of the associative Yang-Baxter equation at (u, u', v, v').
Tensor3 aybe_lhs(const RFun& r, cplx u, cplx up, cplx v, cplx vp);
// Left-hand side of the multiplicative form at (x, x'; y1, y2, y3).
Tensor3 aybe2_lhs(const MFun& r, cplx x, cplx xp, cplx y1, cplx y2, cplx y3);
Tensor3 aybe2_lhs(const std::function<Tensor2(cplx)>& r, cplx x, cplx xp);

Report residual_aybe(const RFun& r, const SamplePlan& plan, double tol = kClosedFormTol);
Report residual_unitarity(const RFun& r, const SamplePlan& plan, double tol = kClosedFormTol);
// R^{12}(v)R^{13}(v+v')R^{23}(v') - R^{23}(v')R^{13}(v+v')R^{12}(v) with
// R(v) = R(u, v); u is drawn per sample unless fixed.
Report residual_qybe(const RFun& R, const SamplePlan& plan, double tol = kClosedFormTol,
                     std::optional<cplx> u_fixed = std::nullopt);
Report residual_qybe_unitarity(const RFun& R, const SamplePlan& plan, double tol = kClosedFormTol);
// Classical Yang-Baxter equation in v (the u argument of r0 is ignored).
Report residual_cybe(const RFun& r0, const SamplePlan& plan, double tol = kClosedFormTol);
// Multiplicative equation plus its unitarity condition; multiplicative
// variables are sampled as exponentials of rectangle points.
Report residual_aybe2(const MFun& r, const SamplePlan& plan, double tol = kClosedFormTol);
// s(u, v) = r(u, v) r(-u, v) against scalar(u, v) 1(x)1.
Report residual_s_identity(const RFun& r, const SamplePlan& plan, double tol = kClosedFormTol,
                           const std::function<cplx(cplx, cplx)>& scalar = trig_s_scalar);
// Mutual equality of the three cubic expressions built from r and s.
Report residual_cubic(const RFun& r, const SamplePlan& plan, double tol = kClosedFormTol);
// The four conditions on the a/b/c decomposition of r_multiplicative.
Report residual_abc(const OrderedBD& obd, const SamplePlan& plan, double tol = kClosedFormTol);
Report residual_abc(int n, const std::function<ABCParts(cplx)>& parts, const SamplePlan& plan,
                    double tol = kClosedFormTol);

struct HFunction {
  std::string name;
  std::function<cplx(cplx)> h;
  std::function<cplx(cplx)> dh;
  std::function<double(cplx)> clearance;
};
HFunction h_inverse_v();
// coth(v/2)/2 leaves the constant residual 1/4: with v12 + v23 + v31 = 0 the
// pairwise products of coth(v_ij/2) sum to -1.
HFunction h_half_coth();
// coth(v/2)/2 - v/12, the trigonometric solution with Laurent form 1/v + O(v^3).
HFunction h_half_coth_shifted();
// [h(v12)+h(v23)+h(v31)]^2 + h'(v12)+h'(v23)+h'(v31).
Report residual_h_equation(const HFunction& h, const SamplePlan& plan, double tol = 1e-10);

Report residual_symmetry(const RFun& r, const MatA& a, const SamplePlan& plan, double tol = kClosedFormTol);

// AYBE for r0 against r1^{12}(v) + r1^{13}(v+v') + r1^{23}(v').
Report residual_r0_r1(const RFun& r, const SamplePlan& plan, double tol = kExtractionTol, double eps0 = 1e-4,
                      double eps1 = 1e-3);

// trig_r(u, v + 2 pi i) against (D(x)1) trig_r(u, v) (D^{-1}(x)1), and the
// full periods 2 pi i N in u and v.
Report residual_quasi_period(const AssocBD& bd, const SamplePlan& plan, double tol = 1e-10);
Report residual_quasi_period(const RFun& r, const MatA& twist, const SamplePlan& plan, double tol = 1e-10);

}  // namespace aybe
