#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "aybe/bd.hpp"
#include "aybe/bundles.hpp"
#include "aybe/tensor.hpp"
#include "aybe/verify.hpp"
#include "json.hpp"

namespace aybe {

using nlohmann::json;

class JsonInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Labels are 1-based in JSON and 0-based in memory.
struct StructureDoc {
  AssocBD bd;
  std::optional<Edge> alpha0;
};

json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const AssocBD& bd, const std::optional<Edge>& alpha0 = std::nullopt);
json to_json(const OrderedBD& obd);
StructureDoc structure_from_json(const json& j);

json to_json(const SplittingMatrix& m);
SplittingMatrix splitting_from_json(const json& j);

json to_json(const Report& r);

// Nonzero coefficients as {"n": N, "terms": [[p, q, r, s, [re, im]], ...]}.
json to_json(const Tensor2& t, double drop = 0.0);

// Parses text, rethrowing parse failures as JsonInputError.
json parse_json(const std::string& text);

}  // namespace aybe
