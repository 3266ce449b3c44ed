#pragma once

#include "fdim/group_expr.hpp"
#include "fdim/interval.hpp"
#include "fdim/serialization.hpp"
#include "fdim/vn_expr.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace freedim {

struct Betti {
  std::optional<Integer> order;  ///< nullopt is infinite
  Rational beta0;
  Rational beta1;
};

/// L2-Betti numbers b0, b1. Throws InapplicableError when an amalgam is
/// taken over a subgroup with nonzero b1.
Betti betti(const GroupExpr& g);

/// b1 - b0 + 1.
Rational delta_star(const GroupExpr& g);

struct GroupDelta0 {
  Rational value;
  std::vector<std::string> rule_trace;
  std::vector<std::string> assumptions;
};

/// Recursion over class A: amenable 1 - 1/|G|, property (T) and products of
/// infinite groups 1, amalgams over amenable H add and subtract 1 - 1/|H|.
/// Throws InapplicableError outside class A.
GroupDelta0 delta0_group(const GroupExpr& g);

struct GroupInvariants {
  std::optional<Integer> order;
  Rational beta0;
  Rational beta1;
  Rational delta_star;
  std::optional<Rational> delta0;  ///< absent outside class A
  bool regular = false;
  bool in_class_a = false;
  std::vector<std::string> rule_trace;
  std::vector<std::string> assumptions;
  std::string delta0_note;  ///< why delta0 is absent
};

GroupInvariants group_invariants(const GroupExpr& g);
Json to_json(const GroupInvariants& inv);

using DimValue = std::variant<Rational, Interval>;

struct DimResult {
  DimValue value;
  bool regular = false;
  std::vector<std::string> rule_trace;
  std::vector<std::string> assumptions;
};

struct VnOptions {
  /// Directory against which relative (hyperfinite file) paths resolve.
  std::filesystem::path base_dir = ".";
  /// Target width for enclosures read from tensor-sequence files.
  double tol = 1e-6;
};

/// Throws InapplicableError naming the failed hypothesis when no rule applies.
DimResult delta0_vn(const VnExpr& e, const VnOptions& options = {});
Json to_json(const DimResult& r);

/// "p/q" for exact values, {"lo","hi"} for intervals.
Json dim_value_json(const DimValue& v);
std::string to_string(const DimValue& v);
bool contains(const DimValue& v, const Rational& x);

}  // namespace freedim
