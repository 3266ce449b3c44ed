#pragma once

#include "fdim/algebra.hpp"
#include "fdim/group_expr.hpp"

#include <memory>
#include <optional>
#include <string>

namespace freedim {

struct VnExpr;
using VnPtr = std::shared_ptr<const VnExpr>;

/// von Neumann algebra expression tree.
///   (hyperfinite "file.json") | (hyperfinite (m w) ... [(diffuse w)])
///   (diffuse) | (bs P/Q) | (amalgam-vn A B over H) | (corner A p/q) | (group G)
/// H must be one of the hyperfinite forms.
struct VnExpr {
  enum class Kind { Hyperfinite, Diffuse, Bs, Amalgam, Corner, Group };

  Kind kind = Kind::Diffuse;
  std::optional<FdAlgebra> algebra;  ///< inline hyperfinite
  std::string path;                  ///< file-backed hyperfinite
  Rational value;                    ///< s of (bs s), trace of (corner _ p/q)
  VnPtr left, right, over;           ///< amalgam children; corner uses left
  GroupPtr group;
  std::size_t column = 1;

  bool hyperfinite() const noexcept {
    return kind == Kind::Hyperfinite || kind == Kind::Diffuse || kind == Kind::Bs;
  }
};

VnPtr make_hyperfinite(FdAlgebra a);
VnPtr make_hyperfinite_file(std::string path);
VnPtr make_diffuse();
/// s in (1, 2).
VnPtr make_bs(Rational s);
VnPtr make_amalgam_vn(VnPtr a, VnPtr b, VnPtr over);
/// trace in (0, 1].
VnPtr make_corner(VnPtr inner, Rational trace);
VnPtr make_group_vn(GroupPtr g);

VnPtr parse_vn_expr(std::string_view text);
VnPtr parse_vn_sexpr(const SNode& node);
std::string print(const VnExpr& e);

}  // namespace freedim
