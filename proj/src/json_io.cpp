#include "aybe/json_io.hpp"

#include <cmath>

namespace aybe {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw JsonInputError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw JsonInputError(std::string("missing field \"") + key + "\"");
  return *it;
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw JsonInputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<int> labels_from_json(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw JsonInputError(std::string(what) + " must be an array of length n");
  std::vector<int> out;
  for (const auto& e : j) {
    int v = as_int(e, what);
    if (v < 1 || v > n) throw JsonInputError(std::string(what) + " entries must lie in [1, n]");
    out.push_back(v - 1);
  }
  return out;
}

Edge edge_from_json(const json& j, int n, const char* what) {
  if (!j.is_array() || j.size() != 2) throw JsonInputError(std::string(what) + " edges must be pairs");
  int a = as_int(j[0], what), b = as_int(j[1], what);
  if (a < 1 || a > n || b < 1 || b > n) throw JsonInputError(std::string(what) + " labels must lie in [1, n]");
  return {a - 1, b - 1};
}

json edge_to_json(const Edge& e) { return json::array({e.first + 1, e.second + 1}); }

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw JsonInputError("complex numbers are encoded as [re, im]");
}

json to_json(const AssocBD& bd, const std::optional<Edge>& alpha0) {
  json j;
  j["n"] = bd.n;
  auto perm = [](const CyclicPerm& p) {
    json a = json::array();
    for (int v : p.images()) a.push_back(v + 1);
    return a;
  };
  j["c0"] = perm(bd.c0);
  j["c"] = perm(bd.c);
  j["gamma1"] = json::array();
  for (const Edge& e : bd.gamma1) j["gamma1"].push_back(edge_to_json(e));
  if (alpha0) j["alpha0"] = edge_to_json(*alpha0);
  return j;
}

json to_json(const OrderedBD& obd) { return to_json(obd.bd, obd.alpha0); }

StructureDoc structure_from_json(const json& j) {
  const int n = as_int(field(j, "n"), "n");
  if (n < 1) throw JsonInputError("n must be positive");
  auto c0 = labels_from_json(field(j, "c0"), n, "c0");
  auto c = labels_from_json(field(j, "c"), n, "c");
  const json& g = field(j, "gamma1");
  if (!g.is_array()) throw JsonInputError("gamma1 must be an array");
  EdgeSet gamma1;
  for (const auto& e : g) gamma1.push_back(edge_from_json(e, n, "gamma1"));
  StructureDoc doc;
  try {
    doc.bd = make_bd(CyclicPerm(c0), CyclicPerm(c), gamma1);
  } catch (const BDError& e) {
    throw JsonInputError(std::string("invalid structure: ") + e.what());
  }
  if (j.contains("alpha0")) {
    doc.alpha0 = edge_from_json(j["alpha0"], n, "alpha0");
    try {
      make_ordered(doc.bd, *doc.alpha0);
    } catch (const std::exception& e) {
      throw JsonInputError(std::string("invalid alpha0: ") + e.what());
    }
  }
  return doc;
}

json to_json(const SplittingMatrix& m) {
  return {{"N", m.rows}, {"n", m.cols}, {"k", m.shift}, {"m", m.m}};
}

SplittingMatrix splitting_from_json(const json& j) {
  const json& mj = field(j, "m");
  if (!mj.is_array()) throw JsonInputError("m must be an array of rows");
  std::vector<std::vector<int>> m;
  for (const auto& row : mj) {
    if (!row.is_array()) throw JsonInputError("m must be an array of rows");
    std::vector<int> r;
    for (const auto& e : row) r.push_back(as_int(e, "m"));
    m.push_back(r);
  }
  int shift = j.contains("k") ? as_int(j["k"], "k") : 1;
  if (j.contains("N") && as_int(j["N"], "N") != static_cast<int>(m.size()))
    throw JsonInputError("N does not match the number of rows of m");
  if (j.contains("n") && !m.empty() && as_int(j["n"], "n") != static_cast<int>(m[0].size()))
    throw JsonInputError("n does not match the number of columns of m");
  try {
    return make_splitting(m, shift);
  } catch (const std::invalid_argument& e) {
    throw JsonInputError(std::string("invalid splitting matrix: ") + e.what());
  }
}

json to_json(const Report& r) {
  json j;
  j["suite"] = r.suite;
  j["seed"] = r.plan.seed;
  j["samples"] = r.residuals.size();
  j["max_residual"] = std::isfinite(r.max_residual) ? json(r.max_residual) : json("inf");
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  return j;
}

json to_json(const Tensor2& t, double drop) {
  const int n = t.n();
  json terms = json::array();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          cplx k = t.coeff(p, q, r, s);
          if (std::abs(k) > drop) terms.push_back({p + 1, q + 1, r + 1, s + 1, to_json(k)});
        }
  return {{"n", n}, {"terms", terms}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw JsonInputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace aybe
