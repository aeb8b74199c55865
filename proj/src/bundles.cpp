#include "aybe/bundles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace aybe {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

void require_simple(const SplittingMatrix& m) {
  Simplicity s = is_simple(m);
  if (!s.simple) throw NotSimple(s.message);
}

using TauTable = std::map<Edge, Edge>;

TauTable tau_table(const SplittingMatrix& m) {
  TauTable t;
  for (int i = 0; i < m.rows; ++i)
    for (int ip = 0; ip < m.rows; ++ip)
      if (auto img = tau_matrix(m, {i, ip})) t[{i, ip}] = *img;
  return t;
}

std::optional<Edge> tau_power(const TauTable& t, Edge e, int k) {
  for (int s = 0; s < k; ++s) {
    auto it = t.find(e);
    if (it == t.end()) return std::nullopt;
    e = it->second;
  }
  return e;
}

std::optional<Edge> tau_inverse_power(const TauTable& t, Edge e, int k) {
  for (int s = 0; s < k; ++s) {
    auto it = std::find_if(t.begin(), t.end(), [&](const auto& kv) { return kv.second == e; });
    if (it == t.end()) return std::nullopt;
    e = it->first;
  }
  return e;
}

double smallest_singular_value(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  return a.rows() >= a.cols() ? sv(sv.size() - 1) : 0.0;
}

}  // namespace

SplittingMatrix make_splitting(std::vector<std::vector<int>> m, int shift) {
  SplittingMatrix s;
  s.rows = static_cast<int>(m.size());
  if (s.rows < 1) throw std::invalid_argument("splitting matrix needs at least one row");
  s.cols = static_cast<int>(m[0].size());
  if (s.cols < 1) throw std::invalid_argument("splitting matrix needs at least one column");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != s.cols) throw std::invalid_argument("splitting matrix rows differ in length");
  if (s.rows > 1) {
    if (shift < 1 || shift >= s.rows) throw std::invalid_argument("shift must lie in [1, N-1]");
    if (std::gcd(shift, s.rows) != 1) throw std::invalid_argument("shift must be coprime to N");
  }
  s.shift = s.rows > 1 ? shift : 1;
  s.m = std::move(m);
  return s;
}

int entry(const SplittingMatrix& m, int i, int j) {
  const int q = (j >= 0 ? j / m.cols : -((-j + m.cols - 1) / m.cols));
  const int r = j - q * m.cols;
  return m.m[mod(i - q * m.shift, m.rows)][r];
}

Simplicity is_simple(const SplittingMatrix& m) {
  Simplicity out;
  const int n = m.rows, period = m.cols * m.rows;
  auto fail = [&](int i, int ip, char cond, const std::string& msg) {
    out = {false, i, ip, cond, msg + " for rows " + std::to_string(i + 1) + "," + std::to_string(ip + 1)};
    return out;
  };
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip)
      for (int j = 0; j < m.cols; ++j)
        if (std::abs(m.m[i][j] - m.m[ip][j]) > 1) return fail(i, ip, 'a', "difference outside {-1,0,1}");
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      if (i == ip) continue;
      std::vector<int> nz;
      for (int j = 0; j < period; ++j) {
        int d = entry(m, i, j) - entry(m, ip, j);
        if (d) nz.push_back(d);
      }
      if (nz.empty()) return fail(i, ip, 'b', "difference sequence is identically zero");
      for (std::size_t t = 0; t < nz.size(); ++t)
        if (nz[t] == nz[(t + 1) % nz.size()]) return fail(i, ip, 'b', "signs of the difference sequence do not alternate");
    }
  return out;
}

int hom_dim(const SplittingMatrix& m, cplx x) {
  const int n = m.rows, cols = m.cols;
  // For each (j, i, i') with d = m^j_i - m^j_{i'} >= 0 the entry is a section
  // of O(d): d + 1 coefficients, the first is its value at 0, the last at infinity.
  std::map<std::tuple<int, int, int>, std::pair<int, int>> slot;
  int unknowns = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i)
      for (int ip = 0; ip < n; ++ip) {
        int d = m.m[i][j] - m.m[ip][j];
        if (d < 0) continue;
        slot[{j, i, ip}] = {unknowns, unknowns + d};
        unknowns += d + 1;
      }
  if (unknowns == 0) return 0;
  std::vector<Vec> rows;
  auto add_eq = [&](int j0, int i0, int ip0, int j1, int i1, int ip1, cplx factor) {
    Vec row = Vec::Zero(unknowns);
    auto a = slot.find({j0, i0, ip0});
    auto b = slot.find({j1, i1, ip1});
    if (a != slot.end()) row(a->second.first) += 1.0;
    if (b != slot.end()) row(b->second.second) -= factor;
    if (row.cwiseAbs().maxCoeff() > 0) rows.push_back(row);
  };
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      for (int j = 1; j < cols; ++j) add_eq(j, i, ip, j - 1, i, ip, 1.0);
      add_eq(0, i, ip, cols - 1, mod(i + m.shift, n), mod(ip + m.shift, n), x);
    }
  if (rows.empty()) return unknowns;
  Mat a(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) a.row(r) = rows[r].transpose();
  // Absolute cutoff: Eigen's threshold is relative, which counts round-off as
  // rank when the system is a single tiny equation.
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-9 * std::max(1.0, sv(0))) ++rank;
  return unknowns - rank;
}

std::vector<int> star_order(const SplittingMatrix& m) {
  require_simple(m);
  const int n = m.rows, period = m.cols * m.rows;
  auto precedes = [&](int i, int ip) {
    for (int j = 0; j < period; ++j) {
      int d = entry(m, i, j) - entry(m, ip, j);
      if (d) return d < 0;
    }
    return false;
  };
  std::vector<int> pos(n, 0);
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip)
      if (ip != i && precedes(ip, i)) ++pos[i];
  std::vector<int> check(pos);
  std::sort(check.begin(), check.end());
  for (int p = 0; p < n; ++p)
    if (check[p] != p) throw std::logic_error("star_order: relation is not a total order");
  return pos;
}

std::optional<Edge> tau_matrix(const SplittingMatrix& m, const Edge& pair) {
  auto [i, ip] = pair;
  if (i == ip) return std::nullopt;
  const auto pos = star_order(m);
  const int ci = mod(i - m.shift, m.rows), cip = mod(ip - m.shift, m.rows);
  if (pos[ci] > pos[cip]) return std::nullopt;
  for (int j = 1; j < m.cols; ++j)
    if (m.m[i][j] != m.m[ip][j]) return std::nullopt;
  return Edge{ci, cip};
}

OrderedBD bd_from_matrix(const SplittingMatrix& m) {
  const auto pos = star_order(m);
  const int n = m.rows;
  std::vector<int> at(n);
  for (int i = 0; i < n; ++i) at[pos[i]] = i;
  std::vector<int> c0(n), c(n);
  for (int i = 0; i < n; ++i) {
    c0[i] = at[(pos[i] + 1) % n];
    c[i] = mod(i - m.shift, n);
  }
  EdgeSet p1;
  for (const auto& [a, img] : tau_table(m)) p1.push_back(a);
  p1 = make_edge_set(p1);
  const CyclicPerm cp0(c0);
  EdgeSet g1;
  for (const Edge& e : p1)
    if (cp0(e.first) == e.second) g1.push_back(e);
  OrderedBD obd = make_ordered(make_bd(cp0, CyclicPerm(c), g1), {at[n - 1], at[0]});
  if (chain_sets(obd.bd).p1 != p1) throw std::logic_error("bd_from_matrix: chain closure differs from tau domain");
  if (!alpha0_outside_gamma2(obd)) throw std::logic_error("bd_from_matrix: alpha0 lies in gamma2");
  return obd;
}

SplittingMatrix matrix_from_sequence(int n_rows, int shift, const std::vector<int>& seq) {
  const int n = n_rows;
  if (n < 2) throw std::invalid_argument("matrix_from_sequence: N must be at least 2");
  if (static_cast<int>(seq.size()) != n) throw std::invalid_argument("matrix_from_sequence: sequence length must be N");
  if (std::gcd(shift, n) != 1 || 2 * shift < n || shift >= n)
    throw std::invalid_argument("matrix_from_sequence: shift must be coprime to N with N/2 <= shift < N");
  if (seq[0] != 1) throw std::invalid_argument("matrix_from_sequence: sequence must start with 1");
  for (int i = 1; i < n; ++i)
    if (seq[i] - seq[i - 1] != 0 && seq[i] - seq[i - 1] != 1)
      throw std::invalid_argument("matrix_from_sequence: steps must be 0 or 1");
  const int cols = seq.back() + 1;
  std::vector<std::vector<int>> m(n, std::vector<int>(cols, 0));
  // 1-based rows k+1..N get 1 in column 0; row k+1-i gets 1 in column a_i.
  for (int r = shift; r < n; ++r) m[r][0] = 1;
  for (int i = 1; i <= n; ++i) m[mod(shift - i, n)][seq[i - 1]] = 1;
  return make_splitting(m, shift);
}

std::vector<int> sequence_for(const OrderedBD& obd, int shift) {
  const int n = obd.bd.n;
  const auto pos = positions(obd);
  for (int i = 0; i < n; ++i)
    if (pos[i] != i) throw std::invalid_argument("sequence_for: order must be 0 < 1 < ... < N-1");
  for (int i = 0; i < n; ++i)
    if (obd.bd.c(i) != mod(i - shift, n)) throw std::invalid_argument("sequence_for: C must equal C0^{-shift}");
  std::vector<int> seq{1};
  for (int i = 1; i < n; ++i) {
    // alpha_j = (j, j+1) in 1-based labels, alpha_0 = (N, 1).
    int j = mod(shift - i, n);
    Edge alpha{mod(j - 1, n), j};
    seq.push_back(contains(obd.bd.gamma1, alpha) ? seq.back() : seq.back() + 1);
  }
  return seq;
}

bool realizable(const OrderedBD& obd) {
  if (!alpha0_outside_gamma2(obd)) return false;
  for (int k = 0; k < obd.bd.n; ++k)
    if (obd.bd.c0.pow(k).images() == obd.bd.c.images()) return true;
  return false;
}

MasseyMap massey_closed(const SplittingMatrix& m, cplx x, cplx y, cplx y2) {
  const auto pos = star_order(m);
  const TauTable tau = tau_table(m);
  const int n = m.rows;
  const int depth = n * n;
  MasseyMap t = Mat::Zero(n * n, n * n);
  auto col = [n](const Edge& e) { return e.first * n + e.second; };
  const cplx geo = 1.0 / (1.0 - std::pow(x, n));
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      const int row = i * n + ip;
      if (i == ip) {
        t(row, row) += y / (y2 - y);
        for (int s = 0; s < n; ++s) {
          int q = mod(i + s * m.shift, n);
          t(row, q * n + q) += std::pow(x, s) * geo;
        }
      } else if (pos[i] < pos[ip]) {
        t(row, row) += y / (y2 - y);
        for (int k = 1; k <= depth; ++k) {
          auto e = tau_power(tau, {i, ip}, k);
          if (!e) break;
          t(row, col(*e)) -= std::pow(x, -k);
        }
      } else {
        t(row, row) += y2 / (y2 - y);
        for (int k = 1; k <= depth; ++k) {
          auto e = tau_inverse_power(tau, {ip, i}, k);
          if (!e) break;
          Edge s = flip(*e);
          double eps = pos[s.first] < pos[s.second] ? 1.0 : 0.0;
          t(row, col(s)) += std::pow(y, eps) * std::pow(x, k);
        }
        for (int k = 1; k <= depth; ++k) {
          auto e = tau_power(tau, {i, ip}, k);
          if (!e) break;
          t(row, col(*e)) -= y2 * std::pow(x, -k);
        }
      }
    }
  return t;
}

MasseyMap massey_oracle(const SplittingMatrix& m, cplx x, cplx y, cplx y2) {
  require_simple(m);
  const int n = m.rows, cols = m.cols;
  // Section shapes per (j, i, i'), d = m^j_i - m^j_{i'} in {-1, 0, 1}:
  //  column 0 carries the pole at y with residue b_{ii'}:
  //    d = -1: a(0) = -b, a(inf) = y b, no unknowns;
  //    d =  0: unknowns a(0), a(inf) with a(inf) - a(0) = b;
  //    d =  1: unknowns a(0), a(inf).
  //  other columns: d = -1 zero, d = 0 one constant, d = 1 values at 0 and inf.
  enum Shape { Fixed, Zero, Constant, Free };
  struct Slot {
    Shape shape;
    int at0 = -1, atinf = -1;
  };
  std::map<std::tuple<int, int, int>, Slot> slot;
  int unknowns = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i)
      for (int ip = 0; ip < n; ++ip) {
        int d = m.m[i][j] - m.m[ip][j];
        Slot s;
        if (d < 0) {
          s.shape = j == 0 ? Fixed : Zero;
        } else if (d == 0 && j != 0) {
          s.shape = Constant;
          s.at0 = s.atinf = unknowns++;
        } else {
          s.shape = Free;
          s.at0 = unknowns++;
          s.atinf = unknowns++;
        }
        slot[{j, i, ip}] = s;
      }

  MasseyMap t = Mat::Zero(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int pp = 0; pp < n; ++pp) {
      auto b = [&](int i, int ip) { return (i == p && ip == pp) ? cplx(1.0) : cplx(0.0); };
      std::vector<Vec> rows;
      std::vector<cplx> rhs;
      // Linear form for the value at 0 (at_zero) or infinity of a slot.
      auto value = [&](int j, int i, int ip, bool at_zero, Vec& coeffs, cplx& constant) {
        const Slot& s = slot.at({j, i, ip});
        coeffs = Vec::Zero(unknowns);
        constant = 0.0;
        if (s.shape == Zero) return;
        if (s.shape == Fixed) {
          constant = at_zero ? -b(i, ip) : y * b(i, ip);
          return;
        }
        coeffs(at_zero ? s.at0 : s.atinf) = 1.0;
      };
      for (int i = 0; i < n; ++i)
        for (int ip = 0; ip < n; ++ip) {
          const Slot& s0 = slot.at({0, i, ip});
          if (s0.shape == Free && m.m[i][0] == m.m[ip][0]) {
            Vec r = Vec::Zero(unknowns);
            r(s0.atinf) = 1.0;
            r(s0.at0) = -1.0;
            rows.push_back(r);
            rhs.push_back(b(i, ip));
          }
          for (int j = 0; j < cols; ++j) {
            Vec c0, c1;
            cplx k0, k1;
            cplx factor = 1.0;
            value(j, i, ip, true, c0, k0);
            if (j > 0) {
              value(j - 1, i, ip, false, c1, k1);
            } else {
              value(cols - 1, mod(i + m.shift, n), mod(ip + m.shift, n), false, c1, k1);
              factor = x;
            }
            Vec r = c0 - factor * c1;
            cplx v = factor * k1 - k0;
            if (r.size() && r.cwiseAbs().maxCoeff() == 0.0) {
              if (std::abs(v) > 0) throw SingularSystem("massey_oracle: inconsistent constant equation");
              continue;
            }
            rows.push_back(r);
            rhs.push_back(v);
          }
        }
      Vec sol = Vec::Zero(unknowns);
      if (unknowns > 0) {
        Mat a(rows.size(), unknowns);
        Vec bvec(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          a.row(r) = rows[r].transpose();
          bvec(r) = rhs[r];
        }
        if (smallest_singular_value(a) <= 1e-8)
          throw SingularSystem("massey_oracle: gluing system is singular at x = (" + std::to_string(x.real()) + "," +
                               std::to_string(x.imag()) + ")");
        sol = a.colPivHouseholderQr().solve(bvec);
        if ((a * sol - bvec).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + bvec.cwiseAbs().maxCoeff()))
          throw SingularSystem("massey_oracle: gluing system has no solution");
      }
      for (int i = 0; i < n; ++i)
        for (int ip = 0; ip < n; ++ip) {
          const Slot& s = slot.at({0, i, ip});
          const int d = m.m[i][0] - m.m[ip][0];
          cplx v;
          if (s.shape == Fixed) v = y * b(i, ip) / (y2 - y);
          else if (d == 0) v = y2 * b(i, ip) / (y2 - y) + sol(s.at0);
          else v = y2 * b(i, ip) / (y2 - y) + sol(s.at0) + y2 * sol(s.atinf);
          t(i * n + ip, p * n + pp) = v;
        }
    }
  return t;
}

Tensor2 massey_assemble(const MasseyMap& t) {
  const int nn = static_cast<int>(t.rows());
  int n = 1;
  while (n * n < nn) ++n;
  Tensor2 out(n);
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip)
      for (int p = 0; p < n; ++p)
        for (int pp = 0; pp < n; ++pp) {
          cplx k = t(i * n + ip, p * n + pp);
          if (k != cplx(0.0)) out.add(pp, p, i, ip, k);
        }
  return out;
}

Tensor2 massey_tensor(const SplittingMatrix& m, cplx x, cplx y, cplx y2) {
  return massey_assemble(massey_closed(m, x, y, y2));
}

}  // namespace aybe
