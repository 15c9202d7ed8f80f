#pragma once

#include "cfd/expr.hpp"

#include "json.hpp"

#include <string>

namespace cfd {

nlohmann::json to_json(const Expr& e);
Expr expr_from_json(const nlohmann::json& j);

nlohmann::json complex_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

// Shortest decimal with 17 significant digits.
std::string format_real(double x);

}  // namespace cfd
