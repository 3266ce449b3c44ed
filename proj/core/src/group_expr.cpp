#include "fdim/group_expr.hpp"

#include "fdim/errors.hpp"

#include <cctype>

namespace freedim {

namespace {

std::shared_ptr<GroupExpr> node(GroupExpr::Kind kind) {
  auto g = std::make_shared<GroupExpr>();
  g->kind = kind;
  return g;
}

GroupPtr spelled(GroupExpr::Spelling spelling, std::optional<Integer> order) {
  auto g = node(GroupExpr::Kind::Amenable);
  g->spelling = spelling;
  g->order = std::move(order);
  return g;
}

GroupPtr z_group() { return spelled(GroupExpr::Spelling::Z, std::nullopt); }
GroupPtr trivial_group() { return spelled(GroupExpr::Spelling::Trivial, Integer(1)); }

void check_product(const GroupPtr& a, const GroupPtr& b) {
  if (group_order(*a) || group_order(*b)) throw InvalidArgument("product factors must both be infinite");
}

void check_amalgam(const GroupPtr& a, const GroupPtr& b, const GroupPtr& h) {
  const std::string hs = print(*desugar(h));
  if (hs == print(*desugar(a)) || hs == print(*desugar(b))) {
    throw InvalidArgument("amalgam is improper: the subgroup equals a factor");
  }
  const auto oh = group_order(*h);
  for (const GroupPtr& side : {a, b}) {
    const auto og = group_order(*side);
    if (!og) continue;
    if (!oh) throw InvalidArgument("an infinite subgroup cannot embed in the finite factor " + print(*side));
    if (*og % *oh != 0 || *oh == *og) {
      throw InvalidArgument("subgroup of order " + oh->str() + " cannot embed properly in " + print(*side));
    }
  }
}

std::int64_t parse_count(const SNode& n, std::int64_t minimum, const char* what) {
  if (n.is_list || n.quoted || n.atom.empty()) throw ParseError(std::string("expected ") + what, n.column);
  for (char c : n.atom) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError(std::string("expected ") + what, n.column);
  }
  if (n.atom.size() > 15) throw ParseError(std::string(what) + " is too large", n.column);
  const std::int64_t v = std::stoll(n.atom);
  if (v < minimum) throw ParseError(std::string(what) + " must be at least " + std::to_string(minimum), n.column);
  return v;
}

void expect_arity(const SNode& n, std::size_t arity) {
  if (n.items.size() != arity + 1) {
    throw ParseError("'" + std::string(n.head()) + "' takes " + std::to_string(arity) + " argument(s)", n.column);
  }
}

}  // namespace

GroupPtr make_amenable(std::optional<Integer> order) {
  if (order && *order < 1) throw InvalidArgument("group order must be positive");
  return spelled(GroupExpr::Spelling::Amenable, std::move(order));
}

GroupPtr make_property_t() { return node(GroupExpr::Kind::PropertyT); }

GroupPtr make_product(GroupPtr a, GroupPtr b) {
  check_product(a, b);
  auto g = node(GroupExpr::Kind::Product);
  g->left = std::move(a);
  g->right = std::move(b);
  return g;
}

GroupPtr make_amalgam(GroupPtr a, GroupPtr b, GroupPtr h) {
  check_amalgam(a, b, h);
  auto g = node(GroupExpr::Kind::Amalgam);
  g->left = std::move(a);
  g->right = std::move(b);
  g->over = std::move(h);
  return g;
}

GroupPtr make_free_group(std::int64_t n) {
  if (n < 1) throw InvalidArgument("free group rank must be >= 1");
  auto g = node(GroupExpr::Kind::FreeGroup);
  g->n = n;
  return g;
}

GroupPtr make_surface(std::int64_t genus) {
  if (genus < 2) throw InvalidArgument("surface genus must be >= 2");
  auto g = node(GroupExpr::Kind::Surface);
  g->n = genus;
  return g;
}

GroupPtr parse_group_sexpr(const SNode& n) {
  std::shared_ptr<GroupExpr> out;
  if (!n.is_list) {
    if (n.is_atom("trivial")) {
      out = std::make_shared<GroupExpr>(*trivial_group());
    } else if (n.is_atom("Z")) {
      out = std::make_shared<GroupExpr>(*z_group());
    } else {
      throw ParseError("unknown group atom '" + n.atom + "'", n.column);
    }
    out->column = n.column;
    return out;
  }
  const std::string head(n.head());
  try {
    if (head == "cyclic") {
      expect_arity(n, 1);
      out = std::make_shared<GroupExpr>(*spelled(GroupExpr::Spelling::Cyclic, Integer(parse_count(n.items[1], 1, "an order"))));
    } else if (head == "amenable") {
      expect_arity(n, 1);
      std::optional<Integer> order;
      if (!n.items[1].is_atom("inf")) order = Integer(parse_count(n.items[1], 1, "an order or inf"));
      out = std::make_shared<GroupExpr>(*make_amenable(order));
    } else if (head == "free-group") {
      expect_arity(n, 1);
      out = std::make_shared<GroupExpr>(*make_free_group(parse_count(n.items[1], 1, "a rank")));
    } else if (head == "surface") {
      expect_arity(n, 1);
      out = std::make_shared<GroupExpr>(*make_surface(parse_count(n.items[1], 2, "a genus")));
    } else if (head == "property-t") {
      expect_arity(n, 0);
      out = std::make_shared<GroupExpr>(*make_property_t());
    } else if (head == "product") {
      expect_arity(n, 2);
      out = std::make_shared<GroupExpr>(*make_product(parse_group_sexpr(n.items[1]), parse_group_sexpr(n.items[2])));
    } else if (head == "amalgam") {
      if (n.items.size() != 5 || !n.items[3].is_atom("over")) {
        throw ParseError("expected (amalgam G1 G2 over H)", n.column);
      }
      out = std::make_shared<GroupExpr>(*make_amalgam(parse_group_sexpr(n.items[1]), parse_group_sexpr(n.items[2]),
                                                      parse_group_sexpr(n.items[4])));
    } else if (head.empty()) {
      throw ParseError("expected a group constructor", n.column);
    } else {
      throw ParseError("unknown group constructor '" + head + "'", n.items.front().column);
    }
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), n.column);
  }
  out->column = n.column;
  return out;
}

GroupPtr parse_group_expr(std::string_view text) { return parse_group_sexpr(parse_sexpr(text)); }

std::string print(const GroupExpr& g) {
  switch (g.kind) {
    case GroupExpr::Kind::Amenable:
      switch (g.spelling) {
        case GroupExpr::Spelling::Trivial: return "trivial";
        case GroupExpr::Spelling::Z: return "Z";
        case GroupExpr::Spelling::Cyclic: return "(cyclic " + g.order->str() + ")";
        case GroupExpr::Spelling::Amenable: return "(amenable " + (g.order ? g.order->str() : std::string("inf")) + ")";
      }
      break;
    case GroupExpr::Kind::PropertyT: return "(property-t)";
    case GroupExpr::Kind::Product: return "(product " + print(*g.left) + " " + print(*g.right) + ")";
    case GroupExpr::Kind::Amalgam:
      return "(amalgam " + print(*g.left) + " " + print(*g.right) + " over " + print(*g.over) + ")";
    case GroupExpr::Kind::FreeGroup: return "(free-group " + std::to_string(g.n) + ")";
    case GroupExpr::Kind::Surface: return "(surface " + std::to_string(g.n) + ")";
  }
  return "?";
}

GroupPtr desugar(const GroupPtr& g) {
  switch (g->kind) {
    case GroupExpr::Kind::Amenable:
    case GroupExpr::Kind::PropertyT: return g;
    case GroupExpr::Kind::Product: {
      auto out = std::make_shared<GroupExpr>(*g);
      out->left = desugar(g->left);
      out->right = desugar(g->right);
      return out;
    }
    case GroupExpr::Kind::Amalgam: {
      auto out = std::make_shared<GroupExpr>(*g);
      out->left = desugar(g->left);
      out->right = desugar(g->right);
      out->over = desugar(g->over);
      return out;
    }
    case GroupExpr::Kind::FreeGroup: {
      GroupPtr acc = z_group();
      for (std::int64_t i = 2; i <= g->n; ++i) {
        auto next = node(GroupExpr::Kind::Amalgam);
        next->left = acc;
        next->right = z_group();
        next->over = trivial_group();
        acc = next;
      }
      return acc;
    }
    case GroupExpr::Kind::Surface: {
      auto out = node(GroupExpr::Kind::Amalgam);
      out->left = desugar(make_free_group(2));
      out->right = desugar(make_free_group(2 * g->n - 2));
      out->over = z_group();
      return out;
    }
  }
  return g;
}

std::optional<Integer> group_order(const GroupExpr& g) {
  if (g.kind == GroupExpr::Kind::Amenable) return g.order;
  return std::nullopt;
}

}  // namespace freedim
