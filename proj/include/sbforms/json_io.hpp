#pragma once

#include <nlohmann/json.hpp>

#include "sbforms/fourier.hpp"
#include "sbforms/group.hpp"
#include "sbforms/superfunc.hpp"

namespace sbf {

using Json = nlohmann::json;

// Complex numbers travel as [re, im]; matrices as nested arrays of them.
Json complex_to_json(Complex v);
Complex complex_from_json(const Json& j, const std::string& what);

Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& what);

Json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const Json& j, const std::string& what);

// GroupElement: {n, r, realization: "ball"|"half_plane", A, b, c, d, E}.
// Round-trips exactly (shortest round-trip double formatting).
Json group_element_to_json(const GroupElement& g);
GroupElement group_element_from_json(const Json& j);

// Region: {x_min, x_max, y_min, y_max, u_box: [[re_lo,re_hi,im_lo,im_hi],...],
// grid: [...]}.
Json region_to_json(const Region& region);
Region region_from_json(const Json& j);

// CuspData: {lambda0, chi, D: [d_1, ..., d_r]}.
Json cusp_to_json(const CuspData& cusp);
CuspData cusp_from_json(const Json& j);

Json multi_index_to_json(MultiIndex i);
MultiIndex multi_index_from_json(const Json& j, int r);

// Single component evaluator from a function spec node:
//   {kind: "constant",      value: [re,im]}
//   {kind: "monomial",      coeff: [re,im], powers: [p_1..p_n]}
//   {kind: "fourier_mode",  coeff: [re,im], m: real, u_powers: [q_1..q_{n-1}]}
//   {kind: "cocycle_power", power: int, element: {...} | "cayley" | "cayley_inv"}
Evaluator evaluator_from_spec(const Json& spec, int n, Realization domain,
                              std::string* descriptor_out = nullptr);

// Super function spec: {n, r, weight, domain, components: [{odd_index: [..],
// ...kind node...}, ...]}. Components sharing an odd_index are summed.
SuperFunction super_function_from_json(const Json& j);

} // namespace sbf
