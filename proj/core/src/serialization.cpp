#include "fdim/serialization.hpp"

#include <fstream>
#include <sstream>

namespace freedim {

namespace {

Rational rational_field(const Json& j, const std::string& at) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(at, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(Integer(j.get<std::int64_t>()));
  throw SchemaError(at, "expected an exact fraction string \"p/q\"");
}

}  // namespace

Json algebra_to_json(const FdAlgebra& a) {
  Json blocks = Json::array();
  for (const Block& b : a.blocks()) blocks.push_back({{"dim", b.dim}, {"weight", to_string(b.weight)}});
  return {{"blocks", blocks}, {"diffuse", to_string(a.diffuse_weight())}};
}

FdAlgebra algebra_from_json(const Json& j, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at.empty() ? "/" : at, "expected an object");
  std::vector<Block> blocks;
  if (j.contains("blocks")) {
    const Json& arr = j.at("blocks");
    if (!arr.is_array()) throw SchemaError(at + "/blocks", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string here = at + "/blocks/" + std::to_string(i);
      const Json& b = arr[i];
      if (!b.is_object() || !b.contains("dim") || !b.contains("weight")) {
        throw SchemaError(here, "expected {\"dim\":m,\"weight\":\"p/q\"}");
      }
      if (!b.at("dim").is_number_integer() || b.at("dim").get<std::int64_t>() < 1) {
        throw SchemaError(here + "/dim", "expected a positive integer");
      }
      blocks.push_back(Block{b.at("dim").get<std::int64_t>(), rational_field(b.at("weight"), here + "/weight")});
    }
  }
  Rational diffuse = 0;
  if (j.contains("diffuse")) diffuse = rational_field(j.at("diffuse"), at + "/diffuse");
  try {
    return FdAlgebra(std::move(blocks), diffuse);
  } catch (const InvalidArgument& e) {
    throw SchemaError(at.empty() ? "/" : at, e.what());
  }
}

Json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeMismatch("only square matrices are serialised");
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  }
  return {{"n", m.rows()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& at) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    throw SchemaError(at.empty() ? "/" : at, "expected {\"n\":n,\"entries\":[[re,im],...]}");
  }
  if (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() < 1) {
    throw SchemaError(at + "/n", "expected a positive integer");
  }
  const auto n = j.at("n").get<std::int64_t>();
  const Json& entries = j.at("entries");
  if (!entries.is_array() || static_cast<std::int64_t>(entries.size()) != n * n) {
    throw SchemaError(at + "/entries", "expected n*n entries");
  }
  ComplexMatrix m(n, n);
  for (std::int64_t idx = 0; idx < n * n; ++idx) {
    const Json& e = entries[static_cast<std::size_t>(idx)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw SchemaError(at + "/entries/" + std::to_string(idx), "expected [re, im]");
    }
    m(idx / n, idx % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  if (!m.allFinite()) throw SchemaError(at + "/entries", "entries must be finite");
  return m;
}

Json delement_to_json(const DElement& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks()) blocks.push_back(matrix_to_json(b));
  return {{"blocks", blocks}};
}

Json interval_to_json(const Interval& i) {
  return {{"lo", format_decimal(i.lo)}, {"hi", format_decimal(i.hi)}};
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("/", path.string() + ": " + e.what());
  }
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace freedim
