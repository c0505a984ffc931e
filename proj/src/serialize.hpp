#pragma once

#include <json.hpp>

#include "descent.hpp"
#include "linfty.hpp"

namespace lspace {

using Json = nlohmann::json;

// Rationals travel as strings "p/q" (or "p"); all documents share one schema:
// an algebra is {basis, unit, mult, d, ideal, overflow_pairs?}, an L-infinity
// document adds {module, taylor}, a cover document is {opens, faces, global?,
// comparison?}. Sparse matrices are lists of {from, to, value} by label.

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

Json base_to_json(const BaseAlgebra& a);
BaseAlgebra base_from_json(const Json& j);

Json linfty_to_json(const LInfty& g);
LInfty linfty_from_json(const Json& j);

Json complex_to_json(const CochainComplex& c);
CochainComplex complex_from_json(const Json& j);

FiniteCover cover_from_json(const Json& j);

// U-coordinate vectors as lists of {base, gen, value} by label.
Json uvec_to_json(const LInfty& g, const QVec& v);
QVec uvec_from_json(const LInfty& g, const Json& j);

}  // namespace lspace
