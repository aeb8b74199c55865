#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "aybe/bd.hpp"
#include "aybe/tensor.hpp"

namespace aybe {

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation closer than this to a pole locus throws PoleError.
inline constexpr double kHardPoleDistance = 1e-12;

// A tensor-valued function of (u, v). One-variable families ignore the
// argument they do not depend on. `clearance` returns a lower bound on the
// distance-like quantities (|e^u - 1|, |v|, ...) that vanish on the poles.
struct RFun {
  int n = 0;
  std::string kind;
  std::function<Tensor2(cplx, cplx)> fn;
  std::function<double(cplx, cplx)> clearance;

  Tensor2 operator()(cplx u, cplx v) const;
};

// Multiplicative-variable function r(x; y, y').
struct MFun {
  int n = 0;
  std::string kind;
  std::function<Tensor2(cplx, cplx, cplx)> fn;
  std::function<double(cplx, cplx, cplx)> clearance;

  Tensor2 operator()(cplx x, cplx y, cplx y2) const;
};

RFun trig_r(const AssocBD& bd);
// trig_r divided by ([e^{u/2}-e^{-u/2}]^{-1} + [e^{v/2}-e^{-v/2}]^{-1}).
RFun quantum_R(const AssocBD& bd);

struct ABCParts {
  Tensor2 a;
  Tensor2 b;
  Tensor2 c;
};
// Requires alpha0 not in gamma2.
MFun r_multiplicative(const OrderedBD& obd);
ABCParts abc_parts(const OrderedBD& obd, cplx x);

using DifferenceForm = std::function<Tensor2(cplx u1, cplx u2, cplx v1, cplx v2)>;
// Diagonal gauge of r_multiplicative at x = e^{(u1-u2)/N}, y = e^{v1}, y' = e^{v2};
// the result depends only on u1 - u2 and v1 - v2.
DifferenceForm to_difference_form(const OrderedBD& obd);

struct GaugeParams {
  cplx lambda = 0.0;
  cplx c = 1.0;
  cplx c_prime = 1.0;
  MatA a;  // diagonal; empty means zero
  MatA b;  // diagonal; empty means zero
};
// c e^{lambda u v} exp[u(1(x)a) + v(b(x)1)] r(cu, c'v) exp[-u(a(x)1) - v(b(x)1)].
// Checks that a and b are infinitesimal symmetries of r at three points.
RFun gauge_family(const RFun& r, const GaugeParams& params);

// (phi_a(cu) (x) id)(P) where u phi(u)(X) + [a, phi(u)(X)] = X. Depends on u only.
RFun phi_a_r(const MatA& a, cplx c);
// Closed form for diagonal a: sum 1/(cu + a_i - a_j) e_ij (x) e_ji.
RFun phi_diagonal_closed(const MatA& a, cplx c);

// omega / u^degree + P / v; checks omega^{12} omega^{13} = 0 and
// omega^{21} = (-1)^{degree-1} omega.
RFun nilpotent_r(const Tensor2& omega, int degree);

// (1 + cu/v)^{-1} (1 + u P / v).
RFun rational_R(int n, cplx c);

// 1(x)1/u + P/v.
RFun rational_r(int n);

// Closed-form classical limit (depends on v only).
RFun classical_r0(const AssocBD& bd);

// (r(eps, v) + r(-eps, v)) / 2 and (r(eps, v) - r(-eps, v)) / (2 eps) - 1(x)1/eps^2.
RFun r0_numeric(const RFun& r, double eps = 1e-4);
RFun r1_numeric(const RFun& r, double eps = 1e-3);

// r(u, v) r(-u, v).
RFun s_product(const RFun& r);
// ([e^{v/2}-e^{-v/2}]^{-2} - [e^{u/2}-e^{-u/2}]^{-2}), the scalar of s for trig_r.
cplx trig_s_scalar(cplx u, cplx v);

// Diagonal a = sum_i O(i0, i)/N e_ii, O = minimal k >= 0 with C^k(i0) = i.
// Requires gamma2 to contain neither (C0^{-1}(i0), i0) nor (i0, C0(i0)).
bool schedler_precondition(const AssocBD& bd, int i0);
MatA schedler_symmetry(const AssocBD& bd, int i0);

// D = diag(e^{-2 pi i p/N}), p = number of C0-steps from 0.
MatA quasi_period_twist(const AssocBD& bd);

}  // namespace aybe
