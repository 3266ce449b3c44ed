#pragma once

#include "fdim/rational.hpp"
#include "fdim/sexpr.hpp"

#include <memory>
#include <optional>
#include <string>

namespace freedim {

struct GroupExpr;
using GroupPtr = std::shared_ptr<const GroupExpr>;

/// Group expression tree. Amenable covers trivial, Z, (cyclic n) and
/// (amenable n|inf); FreeGroup and Surface are sugar kept for printing.
struct GroupExpr {
  enum class Kind { Amenable, PropertyT, Product, Amalgam, FreeGroup, Surface };
  enum class Spelling { Trivial, Z, Cyclic, Amenable };

  Kind kind = Kind::Amenable;
  Spelling spelling = Spelling::Amenable;
  std::optional<Integer> order;  ///< Amenable only; nullopt is infinite
  std::int64_t n = 0;            ///< rank of FreeGroup, genus of Surface
  GroupPtr left, right, over;
  std::size_t column = 1;
};

GroupPtr make_amenable(std::optional<Integer> order);
GroupPtr make_property_t();
GroupPtr make_product(GroupPtr a, GroupPtr b);
/// Validates the amalgam invariants; throws InvalidArgument on violation.
GroupPtr make_amalgam(GroupPtr a, GroupPtr b, GroupPtr h);
GroupPtr make_free_group(std::int64_t n);
GroupPtr make_surface(std::int64_t genus);

/// Throws ParseError (with column) on syntax or semantic violations.
GroupPtr parse_group_expr(std::string_view text);
GroupPtr parse_group_sexpr(const SNode& node);

std::string print(const GroupExpr& g);

/// Rewrites FreeGroup and Surface into amalgams: F_1 = Z,
/// F_n = F_{n-1} * Z over trivial, surface g = F_2 *_Z F_{2g-2}.
GroupPtr desugar(const GroupPtr& g);

/// Group order, nullopt when infinite.
std::optional<Integer> group_order(const GroupExpr& g);

}  // namespace freedim
