#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace aybe {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Elements of A = Mat(N, C). Indices are 0-based throughout the library.
using MatA = Mat;

MatA unit_matrix(int n);
MatA elementary(int n, int i, int j);
double max_abs(const Mat& m);

// Element of A (x) A.
//
// Stored as the operator on C^N (x) C^N. The coefficient of e_pq (x) e_rs sits
// at row p*N + r, column q*N + s of op_matrix(); pairing_matrix() puts it at
// row p*N + q, column r*N + s.
class Tensor2 {
 public:
  explicit Tensor2(int n);

  static Tensor2 from_op(const Mat& op);
  static Tensor2 from_pairing(const Mat& pairing);
  static Tensor2 product(const MatA& a, const MatA& b);  // a (x) b

  int n() const { return n_; }
  cplx coeff(int p, int q, int r, int s) const;
  void add(int p, int q, int r, int s, cplx value);
  const Mat& op_matrix() const { return op_; }
  Mat pairing_matrix() const;

  Tensor2& operator+=(const Tensor2& o);
  Tensor2& operator-=(const Tensor2& o);
  Tensor2& operator*=(cplx s);

 private:
  int n_;
  Mat op_;
};

Tensor2 operator+(Tensor2 a, const Tensor2& b);
Tensor2 operator-(Tensor2 a, const Tensor2& b);
Tensor2 operator-(Tensor2 a);
Tensor2 operator*(cplx s, Tensor2 t);
Tensor2 operator*(const Tensor2& a, const Tensor2& b);  // compose2

// Element of A (x) A (x) A, stored as an operator on (C^N)^{(x)3} with
// basis index (a*N + b)*N + c.
class Tensor3 {
 public:
  explicit Tensor3(int n);
  static Tensor3 from_op(const Mat& op);

  int n() const { return n_; }
  cplx coeff(int p1, int q1, int p2, int q2, int p3, int q3) const;
  const Mat& op_matrix() const { return op_; }

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);

 private:
  int n_;
  Mat op_;
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(cplx s, Tensor3 t);
Tensor3 operator*(const Tensor3& a, const Tensor3& b);  // compose3

Tensor2 unit2(int n);
Tensor2 perm_P(int n);
Tensor2 diag_P0(int n);

Tensor2 compose2(const Tensor2& s, const Tensor2& t);
Tensor3 compose3(const Tensor3& s, const Tensor3& t);

// t^{ab}: the first factor of t goes to slot a, the second to slot b
// (slots are 1, 2, 3 as in the superscript notation).
Tensor3 embed(const Tensor2& t, int slot_a, int slot_b);

Tensor2 swap_factors(const Tensor2& t);

// X -> X - tr(X)/N in the chosen factors.
Tensor2 project_sl(const Tensor2& t, bool first, bool second);

MatA mu2(const Tensor2& t);
// Contracts the given factor (1 or 2) with the trace, returns the other one.
MatA partial_trace(const Tensor2& t, int slot);
cplx full_trace(const Tensor2& t);

struct Nondegeneracy {
  bool nondegenerate;
  double condition_number;  // infinity when singular
};
Nondegeneracy is_nondegenerate(const Tensor2& t, double cond_cap = 1e10);

// [a (x) 1 + 1 (x) a, t]
Tensor2 sym_commutator(const Tensor2& t, const MatA& a);

double max_abs(const Tensor2& t);
double max_abs(const Tensor3& t);

class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace aybe
