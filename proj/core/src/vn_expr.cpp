#include "fdim/vn_expr.hpp"

#include "fdim/errors.hpp"

namespace freedim {

namespace {

std::shared_ptr<VnExpr> node(VnExpr::Kind kind) {
  auto e = std::make_shared<VnExpr>();
  e->kind = kind;
  return e;
}

Rational rational_arg(const SNode& n, const char* what) {
  if (n.is_list || n.quoted) throw ParseError(std::string("expected ") + what, n.column);
  try {
    return parse_rational(n.atom);
  } catch (const ParseError&) {
    throw ParseError(std::string("expected ") + what + ", got '" + n.atom + "'", n.column);
  }
}

std::int64_t dim_arg(const SNode& n) {
  const Rational r = rational_arg(n, "a block dimension");
  if (denominator(r) != 1 || r < 1 || r > Rational(1000000000)) throw ParseError("block dimension must be a positive integer", n.column);
  return numerator(r).convert_to<std::int64_t>();
}

FdAlgebra inline_algebra(const SNode& n) {
  std::vector<Block> blocks;
  Rational diffuse = 0;
  bool seen_diffuse = false;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    const SNode& b = n.items[i];
    if (!b.is_list) throw ParseError("expected a block (m w) or (diffuse w)", b.column);
    if (b.head() == "diffuse") {
      if (b.items.size() != 2) throw ParseError("expected (diffuse w)", b.column);
      if (seen_diffuse) throw ParseError("duplicate diffuse part", b.column);
      diffuse = rational_arg(b.items[1], "a weight");
      seen_diffuse = true;
      continue;
    }
    if (b.items.size() != 2) throw ParseError("expected a block (m w)", b.column);
    blocks.push_back(Block{dim_arg(b.items[0]), rational_arg(b.items[1], "a weight")});
  }
  try {
    return FdAlgebra(std::move(blocks), diffuse);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), n.column);
  }
}

std::string algebra_body(const FdAlgebra& a) {
  std::string out;
  for (const Block& b : a.blocks()) out += " (" + std::to_string(b.dim) + " " + to_string(b.weight) + ")";
  if (a.diffuse_weight() != 0) out += " (diffuse " + to_string(a.diffuse_weight()) + ")";
  return out;
}

void expect_arity(const SNode& n, std::size_t arity) {
  if (n.items.size() != arity + 1) {
    throw ParseError("'" + std::string(n.head()) + "' takes " + std::to_string(arity) + " argument(s)", n.column);
  }
}

}  // namespace

VnPtr make_hyperfinite(FdAlgebra a) {
  auto e = node(VnExpr::Kind::Hyperfinite);
  e->algebra = std::move(a);
  return e;
}

VnPtr make_hyperfinite_file(std::string path) {
  if (path.empty()) throw InvalidArgument("empty path");
  auto e = node(VnExpr::Kind::Hyperfinite);
  e->path = std::move(path);
  return e;
}

VnPtr make_diffuse() { return node(VnExpr::Kind::Diffuse); }

VnPtr make_bs(Rational s) {
  if (s <= 1 || s >= 2) throw InvalidArgument("bs parameter must lie in (1, 2)");
  auto e = node(VnExpr::Kind::Bs);
  e->value = std::move(s);
  return e;
}

VnPtr make_amalgam_vn(VnPtr a, VnPtr b, VnPtr over) {
  if (!over->hyperfinite()) throw InvalidArgument("amalgam-vn must be taken over a hyperfinite algebra");
  auto e = node(VnExpr::Kind::Amalgam);
  e->left = std::move(a);
  e->right = std::move(b);
  e->over = std::move(over);
  return e;
}

VnPtr make_corner(VnPtr inner, Rational trace) {
  if (trace <= 0 || trace > 1) throw InvalidArgument("corner trace must lie in (0, 1]");
  auto e = node(VnExpr::Kind::Corner);
  e->left = std::move(inner);
  e->value = std::move(trace);
  return e;
}

VnPtr make_group_vn(GroupPtr g) {
  auto e = node(VnExpr::Kind::Group);
  e->group = std::move(g);
  return e;
}

VnPtr parse_vn_sexpr(const SNode& n) {
  if (!n.is_list) throw ParseError("expected a von Neumann algebra expression", n.column);
  const std::string head(n.head());
  std::shared_ptr<VnExpr> out;
  try {
    if (head == "hyperfinite") {
      if (n.items.size() == 2 && !n.items[1].is_list) {
        out = std::make_shared<VnExpr>(*make_hyperfinite_file(n.items[1].atom));
      } else if (n.items.size() >= 2) {
        out = std::make_shared<VnExpr>(*make_hyperfinite(inline_algebra(n)));
      } else {
        throw ParseError("expected (hyperfinite file.json) or (hyperfinite (m w) ...)", n.column);
      }
    } else if (head == "diffuse") {
      expect_arity(n, 0);
      out = std::make_shared<VnExpr>(*make_diffuse());
    } else if (head == "bs") {
      expect_arity(n, 1);
      out = std::make_shared<VnExpr>(*make_bs(rational_arg(n.items[1], "a rational s")));
    } else if (head == "amalgam-vn") {
      if (n.items.size() != 5 || !n.items[3].is_atom("over")) throw ParseError("expected (amalgam-vn A B over H)", n.column);
      const VnPtr over = parse_vn_sexpr(n.items[4]);
      if (!over->hyperfinite()) throw ParseError("amalgam-vn must be taken over a hyperfinite algebra", n.items[4].column);
      out = std::make_shared<VnExpr>(*make_amalgam_vn(parse_vn_sexpr(n.items[1]), parse_vn_sexpr(n.items[2]), over));
    } else if (head == "corner") {
      expect_arity(n, 2);
      const Rational trace = rational_arg(n.items[2], "a trace p/q");
      if (trace <= 0 || trace > 1) throw ParseError("corner trace must lie in (0, 1]", n.items[2].column);
      out = std::make_shared<VnExpr>(*make_corner(parse_vn_sexpr(n.items[1]), trace));
    } else if (head == "group") {
      expect_arity(n, 1);
      out = std::make_shared<VnExpr>(*make_group_vn(parse_group_sexpr(n.items[1])));
    } else if (head.empty()) {
      throw ParseError("expected a constructor", n.column);
    } else {
      throw ParseError("unknown constructor '" + head + "'", n.items.front().column);
    }
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), n.column);
  }
  out->column = n.column;
  return out;
}

VnPtr parse_vn_expr(std::string_view text) { return parse_vn_sexpr(parse_sexpr(text)); }

std::string print(const VnExpr& e) {
  switch (e.kind) {
    case VnExpr::Kind::Hyperfinite:
      if (e.algebra) return "(hyperfinite" + algebra_body(*e.algebra) + ")";
      return "(hyperfinite " + print_atom(e.path) + ")";
    case VnExpr::Kind::Diffuse: return "(diffuse)";
    case VnExpr::Kind::Bs: return "(bs " + to_string(e.value) + ")";
    case VnExpr::Kind::Amalgam:
      return "(amalgam-vn " + print(*e.left) + " " + print(*e.right) + " over " + print(*e.over) + ")";
    case VnExpr::Kind::Corner: return "(corner " + print(*e.left) + " " + to_string(e.value) + ")";
    case VnExpr::Kind::Group: return "(group " + print(*e.group) + ")";
  }
  return "?";
}

}  // namespace freedim
