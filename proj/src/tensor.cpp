#include "aybe/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace aybe {

namespace {

void require_same(int a, int b, const char* what) {
  if (a != b)
    throw SizeMismatch(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                       std::to_string(b) + ")");
}

int square_root_dim(Eigen::Index rows, Eigen::Index cols, int power) {
  if (rows != cols) throw SizeMismatch("operator matrix is not square");
  int n = 1;
  while (true) {
    Eigen::Index d = 1;
    for (int k = 0; k < power; ++k) d *= n;
    if (d == rows) return n;
    if (d > rows) throw SizeMismatch("operator size is not a power of N");
    ++n;
  }
}

}  // namespace

MatA unit_matrix(int n) { return Mat::Identity(n, n); }

MatA elementary(int n, int i, int j) {
  MatA e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Tensor2::Tensor2(int n) : n_(n), op_(Mat::Zero(n * n, n * n)) {
  if (n < 1) throw std::invalid_argument("tensor size must be positive");
}

Tensor2 Tensor2::from_op(const Mat& op) {
  Tensor2 t(square_root_dim(op.rows(), op.cols(), 2));
  t.op_ = op;
  return t;
}

Tensor2 Tensor2::from_pairing(const Mat& pairing) {
  Tensor2 t(square_root_dim(pairing.rows(), pairing.cols(), 2));
  const int n = t.n_;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) t.op_(p * n + r, q * n + s) = pairing(p * n + q, r * n + s);
  return t;
}

Tensor2 Tensor2::product(const MatA& a, const MatA& b) {
  require_same(static_cast<int>(a.rows()), static_cast<int>(b.rows()), "product");
  Tensor2 t(static_cast<int>(a.rows()));
  t.op_ = Eigen::kroneckerProduct(a, b);
  return t;
}

cplx Tensor2::coeff(int p, int q, int r, int s) const { return op_(p * n_ + r, q * n_ + s); }

void Tensor2::add(int p, int q, int r, int s, cplx value) { op_(p * n_ + r, q * n_ + s) += value; }

Mat Tensor2::pairing_matrix() const {
  Mat m(n_ * n_, n_ * n_);
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) m(p * n_ + q, r * n_ + s) = op_(p * n_ + r, q * n_ + s);
  return m;
}

Tensor2& Tensor2::operator+=(const Tensor2& o) {
  require_same(n_, o.n_, "add");
  op_ += o.op_;
  return *this;
}

Tensor2& Tensor2::operator-=(const Tensor2& o) {
  require_same(n_, o.n_, "subtract");
  op_ -= o.op_;
  return *this;
}

Tensor2& Tensor2::operator*=(cplx s) {
  op_ *= s;
  return *this;
}

Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
Tensor2 operator-(Tensor2 a) { return a *= -1.0; }
Tensor2 operator*(cplx s, Tensor2 t) { return t *= s; }
Tensor2 operator*(const Tensor2& a, const Tensor2& b) { return compose2(a, b); }

Tensor3::Tensor3(int n) : n_(n), op_(Mat::Zero(n * n * n, n * n * n)) {
  if (n < 1) throw std::invalid_argument("tensor size must be positive");
}

Tensor3 Tensor3::from_op(const Mat& op) {
  Tensor3 t(square_root_dim(op.rows(), op.cols(), 3));
  t.op_ = op;
  return t;
}

cplx Tensor3::coeff(int p1, int q1, int p2, int q2, int p3, int q3) const {
  return op_((p1 * n_ + p2) * n_ + p3, (q1 * n_ + q2) * n_ + q3);
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  require_same(n_, o.n_, "add");
  op_ += o.op_;
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  require_same(n_, o.n_, "subtract");
  op_ -= o.op_;
  return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(cplx s, Tensor3 t) { return Tensor3::from_op(s * t.op_matrix()); }
Tensor3 operator*(const Tensor3& a, const Tensor3& b) { return compose3(a, b); }

Tensor2 unit2(int n) { return Tensor2::from_op(Mat::Identity(n * n, n * n)); }

Tensor2 perm_P(int n) {
  Tensor2 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.add(i, j, j, i, 1.0);
  return t;
}

Tensor2 diag_P0(int n) {
  Tensor2 t(n);
  for (int i = 0; i < n; ++i) t.add(i, i, i, i, 1.0);
  return t;
}

Tensor2 compose2(const Tensor2& s, const Tensor2& t) {
  require_same(s.n(), t.n(), "compose2");
  return Tensor2::from_op(s.op_matrix() * t.op_matrix());
}

Tensor3 compose3(const Tensor3& s, const Tensor3& t) {
  require_same(s.n(), t.n(), "compose3");
  return Tensor3::from_op(s.op_matrix() * t.op_matrix());
}

Tensor3 embed(const Tensor2& t, int slot_a, int slot_b) {
  if (slot_a < 1 || slot_a > 3 || slot_b < 1 || slot_b > 3)
    throw std::invalid_argument("embed: slots must be in {1,2,3}");
  if (slot_a == slot_b) throw std::invalid_argument("embed: slots must be distinct");
  const int n = t.n();
  const int a = slot_a - 1, b = slot_b - 1, c = 3 - a - b;
  Mat op = Mat::Zero(n * n * n, n * n * n);
  int row[3], col[3];
  for (row[0] = 0; row[0] < n; ++row[0])
    for (row[1] = 0; row[1] < n; ++row[1])
      for (row[2] = 0; row[2] < n; ++row[2])
        for (col[a] = 0; col[a] < n; ++col[a])
          for (col[b] = 0; col[b] < n; ++col[b]) {
            col[c] = row[c];
            cplx v = t.coeff(row[a], col[a], row[b], col[b]);
            if (v == cplx(0.0)) continue;
            op((row[0] * n + row[1]) * n + row[2], (col[0] * n + col[1]) * n + col[2]) = v;
          }
  return Tensor3::from_op(op);
}

Tensor2 swap_factors(const Tensor2& t) {
  const int n = t.n();
  Tensor2 out(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) out.add(r, s, p, q, t.coeff(p, q, r, s));
  return out;
}

Tensor2 project_sl(const Tensor2& t, bool first, bool second) {
  // In pairing form the first factor indexes rows, the second columns; the
  // projection acts on each side by the same N^2 x N^2 map.
  const int n = t.n();
  Mat pr = Mat::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pr(i * n + i, j * n + j) -= 1.0 / n;
  Mat m = t.pairing_matrix();
  if (first) m = pr * m;
  if (second) m = m * pr.transpose();
  return Tensor2::from_pairing(m);
}

MatA mu2(const Tensor2& t) {
  const int n = t.n();
  MatA out = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s) out(p, s) += t.coeff(p, q, q, s);
  return out;
}

MatA partial_trace(const Tensor2& t, int slot) {
  if (slot != 1 && slot != 2) throw std::invalid_argument("partial_trace: slot must be 1 or 2");
  const int n = t.n();
  MatA out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) out(x, y) += slot == 1 ? t.coeff(i, i, x, y) : t.coeff(x, y, i, i);
  return out;
}

cplx full_trace(const Tensor2& t) { return t.op_matrix().trace(); }

Nondegeneracy is_nondegenerate(const Tensor2& t, double cond_cap) {
  Eigen::JacobiSVD<Mat> svd(t.pairing_matrix());
  const auto& sv = svd.singularValues();
  double hi = sv(0), lo = sv(sv.size() - 1);
  double cond = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return {std::isfinite(cond) && cond <= cond_cap, cond};
}

Tensor2 sym_commutator(const Tensor2& t, const MatA& a) {
  require_same(t.n(), static_cast<int>(a.rows()), "sym_commutator");
  const int n = t.n();
  Mat id = Mat::Identity(n, n);
  Mat g = Eigen::kroneckerProduct(a, id) + Eigen::kroneckerProduct(id, a);
  return Tensor2::from_op(g * t.op_matrix() - t.op_matrix() * g);
}

double max_abs(const Tensor2& t) { return max_abs(t.op_matrix()); }
double max_abs(const Tensor3& t) { return max_abs(t.op_matrix()); }

}  // namespace aybe
