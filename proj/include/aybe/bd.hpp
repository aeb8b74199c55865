#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aybe {

using Edge = std::pair<int, int>;
using EdgeSet = std::vector<Edge>;  // kept sorted and duplicate-free

EdgeSet make_edge_set(EdgeSet edges);
bool contains(const EdgeSet& set, const Edge& e);
Edge flip(const Edge& e);

class CyclicPerm {
 public:
  CyclicPerm() = default;
  // Throws BDError unless images is a single N-cycle on {0..N-1}.
  explicit CyclicPerm(std::vector<int> images);
  static CyclicPerm standard(int n);  // i -> i+1 mod n

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }
  CyclicPerm inverse() const;
  CyclicPerm pow(int k) const;
  // Smallest k >= 0 with this^k(from) == to.
  int steps(int from, int to) const;

  bool operator==(const CyclicPerm& o) const { return images_ == o.images_; }

 private:
  std::vector<int> images_;
};

bool is_transitive_cycle(const std::vector<int>& images);

struct AssocBD {
  int n = 0;
  CyclicPerm c0;
  CyclicPerm c;
  EdgeSet gamma1;
  EdgeSet gamma2;

  bool operator==(const AssocBD& o) const {
    return n == o.n && c0 == o.c0 && c == o.c && gamma1 == o.gamma1 && gamma2 == o.gamma2;
  }
};

class BDError : public std::invalid_argument {
 public:
  enum class Kind { NonTransitive, SizeMismatch, NotInGraph, NotProper, ImageMismatch, NotNilpotent, BadEdge };
  BDError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The graph of c0: {(s, c0(s))}.
EdgeSet graph_of(const CyclicPerm& c0);

// Builds the structure with gamma2 = (C x C)(gamma1) and validates it.
AssocBD make_bd(const CyclicPerm& c0, const CyclicPerm& c, const EdgeSet& gamma1);
void validate(const AssocBD& bd);

struct ChainSets {
  EdgeSet p1;
  EdgeSet p2;
};
// Pairs (s, C0^k(s)) whose intermediate C0-edges all lie in the given subset.
EdgeSet chains(const CyclicPerm& c0, const EdgeSet& gamma);
ChainSets chain_sets(const AssocBD& bd);

// tau^k(alpha); negative k applies the inverse map (domain P2).
std::optional<Edge> tau_apply(const AssocBD& bd, const Edge& alpha, int k);
// Largest k with a nonempty domain of tau^k (0 when gamma1 is empty).
int nilpotency_depth(const AssocBD& bd);

AssocBD opposite(const AssocBD& bd);
AssocBD inverse(const AssocBD& bd);

// All structures with c0 = standard cycle, 1 <= n <= 5.
std::vector<AssocBD> enumerate(int n);

struct OrderedBD {
  AssocBD bd;
  Edge alpha0;  // (max, min) of the compatible complete order
};

OrderedBD make_ordered(const AssocBD& bd, const Edge& alpha0);
// The order with the given minimum: alpha0 = (c0^{-1}(min), min).
OrderedBD ordered_from_min(const AssocBD& bd, int min_element);
// pos[i] = position of i in the order, 0 for the minimum.
std::vector<int> positions(const OrderedBD& obd);
bool is_positive(const std::vector<int>& pos, const Edge& e);
bool alpha0_outside_gamma2(const OrderedBD& obd);

struct SignedChains {
  EdgeSet plus;
  EdgeSet minus;
};
SignedChains signed_chain_sets(const OrderedBD& obd, int k);

// All (bd, alpha0) pairs from enumerate(n) with alpha0 not in gamma2.
std::vector<OrderedBD> enumerate_ordered(int n);

std::string describe(const AssocBD& bd);

}  // namespace aybe
