#include "aybe/bd.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace aybe {

EdgeSet make_edge_set(EdgeSet edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

bool contains(const EdgeSet& set, const Edge& e) { return std::binary_search(set.begin(), set.end(), e); }

Edge flip(const Edge& e) { return {e.second, e.first}; }

bool is_transitive_cycle(const std::vector<int>& images) {
  const int n = static_cast<int>(images.size());
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  for (int v : images) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  int x = 0;
  for (int step = 1; step <= n; ++step) {
    x = images[x];
    if (x == 0) return step == n;
  }
  return false;
}

CyclicPerm::CyclicPerm(std::vector<int> images) : images_(std::move(images)) {
  if (!is_transitive_cycle(images_))
    throw BDError(BDError::Kind::NonTransitive, "permutation is not a transitive cycle");
}

CyclicPerm CyclicPerm::standard(int n) {
  std::vector<int> im(n);
  for (int i = 0; i < n; ++i) im[i] = (i + 1) % n;
  return CyclicPerm(im);
}

CyclicPerm CyclicPerm::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[images_[i]] = i;
  return CyclicPerm(inv);
}

CyclicPerm CyclicPerm::pow(int k) const {
  const int n = size();
  k = ((k % n) + n) % n;
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    int x = i;
    for (int t = 0; t < k; ++t) x = images_[x];
    out[i] = x;
  }
  // A power of an n-cycle need not be an n-cycle; skip the transitivity check.
  CyclicPerm p;
  p.images_ = std::move(out);
  return p;
}

int CyclicPerm::steps(int from, int to) const {
  int x = from;
  for (int k = 0; k < size(); ++k) {
    if (x == to) return k;
    x = images_[x];
  }
  throw std::logic_error("steps: element not in orbit");
}

EdgeSet graph_of(const CyclicPerm& c0) {
  EdgeSet g;
  for (int s = 0; s < c0.size(); ++s) g.emplace_back(s, c0(s));
  return make_edge_set(g);
}

namespace {

EdgeSet image(const CyclicPerm& c, const EdgeSet& set) {
  EdgeSet out;
  for (auto [a, b] : set) out.emplace_back(c(a), c(b));
  return make_edge_set(out);
}

}  // namespace

AssocBD make_bd(const CyclicPerm& c0, const CyclicPerm& c, const EdgeSet& gamma1) {
  AssocBD bd;
  bd.n = c0.size();
  bd.c0 = c0;
  bd.c = c;
  bd.gamma1 = make_edge_set(gamma1);
  for (auto [a, b] : bd.gamma1)
    if (a < 0 || b < 0 || a >= bd.n || b >= bd.n)
      throw BDError(BDError::Kind::BadEdge, "edge label out of range");
  if (c.size() != bd.n) throw BDError(BDError::Kind::SizeMismatch, "C0 and C act on sets of different size");
  bd.gamma2 = image(c, bd.gamma1);
  validate(bd);
  return bd;
}

void validate(const AssocBD& bd) {
  if (bd.n < 1 || bd.c0.size() != bd.n || bd.c.size() != bd.n)
    throw BDError(BDError::Kind::SizeMismatch, "permutation size differs from n");
  if (!is_transitive_cycle(bd.c0.images()) || !is_transitive_cycle(bd.c.images()))
    throw BDError(BDError::Kind::NonTransitive, "C0 and C must be transitive cycles");
  const EdgeSet graph = graph_of(bd.c0);
  for (const EdgeSet* g : {&bd.gamma1, &bd.gamma2}) {
    if (*g != make_edge_set(*g)) throw BDError(BDError::Kind::BadEdge, "edge set is not sorted/unique");
    for (const Edge& e : *g)
      if (!contains(graph, e))
        throw BDError(BDError::Kind::NotInGraph, "edge (" + std::to_string(e.first + 1) + "," +
                                                     std::to_string(e.second + 1) + ") is not in the graph of C0");
    if (g->size() >= graph.size()) throw BDError(BDError::Kind::NotProper, "gamma subsets must be proper");
  }
  if (image(bd.c, bd.gamma1) != bd.gamma2)
    throw BDError(BDError::Kind::ImageMismatch, "gamma2 differs from (C x C)(gamma1)");
  for (Edge e : bd.gamma1) {
    bool left = false;
    for (int k = 1; k <= bd.n && !left; ++k) {
      e = {bd.c(e.first), bd.c(e.second)};
      left = !contains(bd.gamma1, e);
    }
    if (!left) throw BDError(BDError::Kind::NotNilpotent, "C x C does not leave gamma1");
  }
}

EdgeSet chains(const CyclicPerm& c0, const EdgeSet& gamma) {
  EdgeSet out;
  for (int s = 0; s < c0.size(); ++s) {
    int t = s;
    for (int k = 1; k < c0.size(); ++k) {
      if (!contains(gamma, {t, c0(t)})) break;
      t = c0(t);
      out.emplace_back(s, t);
    }
  }
  return make_edge_set(out);
}

ChainSets chain_sets(const AssocBD& bd) { return {chains(bd.c0, bd.gamma1), chains(bd.c0, bd.gamma2)}; }

std::optional<Edge> tau_apply(const AssocBD& bd, const Edge& alpha, int k) {
  if (k < 0) return tau_apply(inverse(bd), alpha, -k);
  const EdgeSet p1 = chains(bd.c0, bd.gamma1);
  Edge e = alpha;
  for (int t = 0; t < k; ++t) {
    if (!contains(p1, e)) return std::nullopt;
    e = {bd.c(e.first), bd.c(e.second)};
  }
  return e;
}

int nilpotency_depth(const AssocBD& bd) {
  const EdgeSet p1 = chains(bd.c0, bd.gamma1);
  const int cap = bd.n * std::max<int>(1, static_cast<int>(bd.gamma1.size()));
  int depth = 0;
  for (Edge e : p1) {
    int k = 0;
    while (contains(p1, e)) {
      e = {bd.c(e.first), bd.c(e.second)};
      ++k;
      if (k > cap) throw BDError(BDError::Kind::NotNilpotent, "tau is not nilpotent");
    }
    depth = std::max(depth, k);
  }
  return depth;
}

AssocBD opposite(const AssocBD& bd) {
  AssocBD out;
  out.n = bd.n;
  out.c0 = bd.c0.inverse();
  out.c = bd.c;
  for (const Edge& e : bd.gamma1) out.gamma1.push_back(flip(e));
  for (const Edge& e : bd.gamma2) out.gamma2.push_back(flip(e));
  out.gamma1 = make_edge_set(out.gamma1);
  out.gamma2 = make_edge_set(out.gamma2);
  validate(out);
  return out;
}

AssocBD inverse(const AssocBD& bd) {
  AssocBD out;
  out.n = bd.n;
  out.c0 = bd.c0;
  out.c = bd.c.inverse();
  out.gamma1 = bd.gamma2;
  out.gamma2 = bd.gamma1;
  validate(out);
  return out;
}

std::vector<AssocBD> enumerate(int n) {
  if (n < 1 || n > 5) throw std::out_of_range("enumerate: n must be in [1,5]");
  const CyclicPerm c0 = CyclicPerm::standard(n);
  const EdgeSet graph = graph_of(c0);
  std::vector<AssocBD> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (!is_transitive_cycle(perm)) continue;
    CyclicPerm c(perm);
    for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
      EdgeSet g1;
      for (int s = 0; s < n; ++s)
        if (mask >> s & 1u) g1.push_back(graph[s]);
      bool inside = true;
      for (auto [a, b] : g1) inside = inside && contains(graph, {c(a), c(b)});
      if (inside) out.push_back(make_bd(c0, c, g1));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

OrderedBD make_ordered(const AssocBD& bd, const Edge& alpha0) {
  if (!contains(graph_of(bd.c0), alpha0))
    throw BDError(BDError::Kind::NotInGraph, "alpha0 is not an edge of C0");
  return {bd, alpha0};
}

OrderedBD ordered_from_min(const AssocBD& bd, int min_element) {
  return make_ordered(bd, {bd.c0.inverse()(min_element), min_element});
}

std::vector<int> positions(const OrderedBD& obd) {
  std::vector<int> pos(obd.bd.n);
  int x = obd.alpha0.second;
  for (int p = 0; p < obd.bd.n; ++p) {
    pos[x] = p;
    x = obd.bd.c0(x);
  }
  return pos;
}

bool is_positive(const std::vector<int>& pos, const Edge& e) { return pos[e.first] < pos[e.second]; }

bool alpha0_outside_gamma2(const OrderedBD& obd) { return !contains(obd.bd.gamma2, obd.alpha0); }

SignedChains signed_chain_sets(const OrderedBD& obd, int k) {
  const auto pos = positions(obd);
  SignedChains out;
  for (const Edge& e : chains(obd.bd.c0, obd.bd.gamma1)) {
    if (!tau_apply(obd.bd, e, k)) continue;
    (is_positive(pos, e) ? out.plus : out.minus).push_back(e);
  }
  return out;
}

std::vector<OrderedBD> enumerate_ordered(int n) {
  std::vector<OrderedBD> out;
  for (const AssocBD& bd : enumerate(n))
    for (const Edge& a0 : graph_of(bd.c0))
      if (!contains(bd.gamma2, a0)) out.push_back(make_ordered(bd, a0));
  return out;
}

std::string describe(const AssocBD& bd) {
  std::ostringstream os;
  auto perm = [&](const CyclicPerm& p) {
    os << "(";
    int x = 0;
    for (int i = 0; i < bd.n; ++i) {
      os << (i ? " " : "") << x + 1;
      x = p(x);
    }
    os << ")";
  };
  os << "N=" << bd.n << " C0=";
  perm(bd.c0);
  os << " C=";
  perm(bd.c);
  os << " G1={";
  for (std::size_t i = 0; i < bd.gamma1.size(); ++i)
    os << (i ? "," : "") << "(" << bd.gamma1[i].first + 1 << "," << bd.gamma1[i].second + 1 << ")";
  os << "}";
  return os.str();
}

}  // namespace aybe
