#pragma once

#include "rankone/diffcas.hpp"

#include <json.hpp>

namespace rankone {

using json = nlohmann::ordered_json;

// Real scalars are "num/den"; non-real scalars are [a, b, c, d] over (1, i, j, k).
json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

// Polynomials in y alone use degree keys ("2": "1/2"); otherwise monomial keys ("u@R1^2*y@R1^2").
json to_json(const Laurent& p);
Laurent laurent_from_json(const json& j);

json to_json(const LinearCombination& c);
json to_json(const CasimirElement& c);
json to_json(const LieBasis& b);
json to_json(const Reduction& r);

// [{"multi_index": {coord: order}, "coeff": polynomial}, ...]
json to_json(const DiffOp& op);
DiffOp diffop_from_json(const json& j);

json to_json(const CompareReport& r);
json to_json(const IwasawaReport& r);

}  // namespace rankone
