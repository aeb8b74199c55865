#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aybe/bd.hpp"
#include "aybe/tensor.hpp"

namespace aybe {

// Splitting types m[i][j] of a rank-N bundle on a cycle of n projective
// lines; columns extend to all integers by m^{j+n}_i = m^j_{i-shift}.
struct SplittingMatrix {
  int rows = 0;
  int cols = 0;
  int shift = 1;
  std::vector<std::vector<int>> m;
};

class NotSimple : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Validates shape and that shift is coprime to N (any shift is accepted for N = 1).
SplittingMatrix make_splitting(std::vector<std::vector<int>> m, int shift = 1);

int entry(const SplittingMatrix& m, int i, int j);

struct Simplicity {
  bool simple = true;
  int i = -1, i2 = -1;  // violating pair
  char condition = 0;   // 'a': difference outside {-1,0,1}; 'b': zero or non-alternating sequence
  std::string message;
};
Simplicity is_simple(const SplittingMatrix& m);

// Dimension of the space of solutions of the gluing system for
// Hom(V^{l1}, V^{l2}) with x = l1/l2.
int hom_dim(const SplittingMatrix& m, cplx x);

// pos[i] = position of i in the order given by the first nonzero difference.
std::vector<int> star_order(const SplittingMatrix& m);

// (i, i') -> (i - shift, i' - shift) when that pair is increasing and the
// rows agree in columns 1..n-1.
std::optional<Edge> tau_matrix(const SplittingMatrix& m, const Edge& pair);

OrderedBD bd_from_matrix(const SplittingMatrix& m);

// Matrix built from (a_1..a_N) with a_1 = 1, a_N = n - 1, unit steps.
SplittingMatrix matrix_from_sequence(int n_rows, int shift, const std::vector<int>& seq);
// The sequence whose matrix realizes obd. Requires the order of obd to be
// 0 < 1 < ... < N-1 and C = C0^{-shift}, N/2 <= shift < N.
std::vector<int> sequence_for(const OrderedBD& obd, int shift);

// alpha0 not in gamma2 and C a power of C0.
bool realizable(const OrderedBD& obd);

// Linear map b -> a(y') on Mat(N), stored as T[(i,i'), (p,p')] with
// row i*N + i' and column p*N + p'.
using MasseyMap = Mat;

MasseyMap massey_closed(const SplittingMatrix& m, cplx x, cplx y, cplx y2);
// Solves the gluing system with prescribed residue for every basis matrix.
MasseyMap massey_oracle(const SplittingMatrix& m, cplx x, cplx y, cplx y2);
// Coefficient k of b_{pp'} in a_{ii'} contributes k e_{p'p} (x) e_{ii'}.
Tensor2 massey_assemble(const MasseyMap& t);
Tensor2 massey_tensor(const SplittingMatrix& m, cplx x, cplx y, cplx y2);

}  // namespace aybe
