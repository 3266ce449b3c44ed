#pragma once

#include "fdim/algebra.hpp"
#include "fdim/representation.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace freedim {

using Json = nlohmann::json;

/// {"blocks":[{"dim":m,"weight":"p/q"},...],"diffuse":"p/q"}
Json algebra_to_json(const FdAlgebra& a);
/// Throws SchemaError naming the offending JSON pointer (prefixed by `at`).
FdAlgebra algebra_from_json(const Json& j, const std::string& at = "");

/// {"n":n,"entries":[[re,im],...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& at = "");

/// {"blocks":[<matrix json>,...]}
Json delement_to_json(const DElement& d);

/// {"lo":"...","hi":"..."} as decimal strings.
Json interval_to_json(const Interval& i);

Json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace freedim
