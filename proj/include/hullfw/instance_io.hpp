#pragma once

#include <filesystem>
#include <string>

#include "hullfw/instance.hpp"

namespace hullfw {

/// Instance JSON:
///   {"name", "dimension",
///    "objective": {"kind": portfolio|sparse_reg|poisson|logistic|tcmp|custom_quadratic,
///                  "params": {...}},
///    "region": {"kind": integer_box|budget|milp, ...},
///    "integer_indices", "lower", "upper"}
/// Quadratic kinds (portfolio, custom_quadratic) carry params {q, c, constant};
/// the others {loss, design, response, ridge, linear}. Both may add
/// strong_convexity_mu and sharpness {theta, M}. Infinite bounds travel as
/// the strings "inf" and "-inf".
std::string instance_to_json(const ProblemInstance& instance);

/// Throws std::invalid_argument naming the offending field.
ProblemInstance instance_from_json(const std::string& text);

void save_instance(const std::filesystem::path& path, const ProblemInstance& instance);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace hullfw
