#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "polyeb/feasibility.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/reductions.hpp"

namespace polyeb {

using nlohmann::json;

/// Default variable names x1..xn, y1..ym.
std::vector<std::string> default_names(std::size_t n, std::size_t m = 0);

json polynomial_to_json(const Polynomial& p, const std::vector<std::string>& names);
/// `field` prefixes every diagnostic; `expected_vars` is checked when nonzero.
Polynomial polynomial_from_json(const json& j, const std::string& field, std::size_t expected_vars = 0);

json box_to_json(const Box& b);
Box box_from_json(const json& j, const std::string& field);

json system_to_json(const ParametricSystem& sys);
ParametricSystem system_from_json(const json& j);

json matrix_polynomial_to_json(const MatrixPolynomial& P);
MatrixPolynomial matrix_polynomial_from_json(const json& j, const std::string& field);

json socp_to_json(const SOCPSpec& s);
SOCPSpec socp_from_json(const json& j, const std::string& field);

json robust_to_json(const RobustQuadSpec& s);
RobustQuadSpec robust_from_json(const json& j, const std::string& field);

json convex_set_to_json(const ConvexSet& c);
ConvexSet convex_set_from_json(const json& j, const std::string& field);
std::vector<ConvexSet> convex_sets_from_json(const json& j);

/// {"P": matrix polynomial, "x_box": [[lo, hi], ...]}.
struct PmiInput {
  MatrixPolynomial P;
  Box x_box;
};
PmiInput pmi_input_from_json(const json& j);

json sup_to_json(const SupEvaluation& e);
json hull_to_json(const SubdifferentialHull& h);

/// Reads and parses a JSON file; ArgumentError carries the path and position.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

ParametricSystem load_system(const std::string& path);
void save_system(const ParametricSystem& sys, const std::string& path);

}  // namespace polyeb
