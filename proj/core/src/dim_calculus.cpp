#include "fdim/dim_calculus.hpp"

#include "fdim/construct.hpp"
#include "fdim/errors.hpp"

#include <algorithm>

namespace freedim {

namespace {

Rational inverse_order(const std::optional<Integer>& order) {
  return order ? Rational(Integer(1), *order) : Rational(0);
}

void add_unique(std::vector<std::string>& list, const std::string& item) {
  if (std::find(list.begin(), list.end(), item) == list.end()) list.push_back(item);
}

void merge(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& s : from) add_unique(into, s);
}

const char* const kEmbedsRomega = "L(G) embeds in R^omega for every property (T) or product node";
const char* const kSubgroupEmbeds = "each amalgam subgroup embeds in both factors";

Betti betti_core(const GroupExpr& g) {
  switch (g.kind) {
    case GroupExpr::Kind::Amenable: return {g.order, inverse_order(g.order), 0};
    case GroupExpr::Kind::PropertyT: return {std::nullopt, 0, 0};
    case GroupExpr::Kind::Product: {
      const Betti a = betti_core(*g.left);
      const Betti b = betti_core(*g.right);
      return {std::nullopt, a.beta0 * b.beta0, a.beta0 * b.beta1 + a.beta1 * b.beta0};
    }
    case GroupExpr::Kind::Amalgam: {
      const Betti h = betti_core(*g.over);
      if (h.beta1 != 0) {
        throw InapplicableError("amalgam over " + print(*g.over) + ": the subgroup has first L2-Betti number " +
                                to_string(h.beta1) + ", the Betti formula needs 0");
      }
      const Betti a = betti_core(*g.left);
      const Betti b = betti_core(*g.right);
      const Rational b1 = a.beta1 + b.beta1 + h.beta0 - a.beta0 - b.beta0 + inverse_order(std::nullopt);
      return {std::nullopt, 0, b1};
    }
    case GroupExpr::Kind::FreeGroup:
    case GroupExpr::Kind::Surface: break;
  }
  throw InvalidArgument("unexpected sugar node");
}

GroupDelta0 delta0_core(const GroupExpr& g) {
  GroupDelta0 out;
  switch (g.kind) {
    case GroupExpr::Kind::Amenable:
      out.value = Rational(1) - inverse_order(g.order);
      out.rule_trace.push_back("amenable-base");
      return out;
    case GroupExpr::Kind::PropertyT:
      out.value = 1;
      out.rule_trace.push_back("property-t-base");
      out.assumptions.push_back(kEmbedsRomega);
      return out;
    case GroupExpr::Kind::Product:
      out.value = 1;
      out.rule_trace.push_back("infinite-product-base");
      out.assumptions.push_back(kEmbedsRomega);
      return out;
    case GroupExpr::Kind::Amalgam: {
      if (g.over->kind != GroupExpr::Kind::Amenable) {
        throw InapplicableError("amalgam over " + print(*g.over) +
                               " is outside class A (the subgroup must be amenable); only deltaStar is available");
      }
      const GroupDelta0 a = delta0_core(*g.left);
      const GroupDelta0 b = delta0_core(*g.right);
      out.value = a.value + b.value - (Rational(1) - inverse_order(g.over->order));
      out.rule_trace = a.rule_trace;
      merge(out.rule_trace, b.rule_trace);
      add_unique(out.rule_trace, "amalgam-over-amenable");
      out.assumptions = a.assumptions;
      merge(out.assumptions, b.assumptions);
      add_unique(out.assumptions, kSubgroupEmbeds);
      return out;
    }
    case GroupExpr::Kind::FreeGroup:
    case GroupExpr::Kind::Surface: break;
  }
  throw InvalidArgument("unexpected sugar node");
}

std::string order_string(const std::optional<Integer>& order) { return order ? order->str() : "inf"; }

// ---------------------------------------------------------------------------
// DimValue arithmetic

DimValue plus(const DimValue& a, const DimValue& b) {
  if (std::holds_alternative<Rational>(a) && std::holds_alternative<Rational>(b)) {
    return Rational(std::get<Rational>(a) + std::get<Rational>(b));
  }
  auto iv = [](const DimValue& v) {
    return std::holds_alternative<Rational>(v) ? Interval::point(std::get<Rational>(v)) : std::get<Interval>(v);
  };
  return iv(a) + iv(b);
}

DimValue times(const Rational& c, const DimValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return Rational(c * *r);
  return scale(c, std::get<Interval>(v));
}

DimValue minus(const DimValue& a, const DimValue& b) { return plus(a, times(Rational(-1), b)); }

struct Eval {
  DimResult result;
  bool hyperfinite = false;
  bool diffuse_factor = false;  ///< the hyperfinite II_1 factor
};

Eval eval(const VnExpr& e, const VnOptions& options) {
  Eval out;
  DimResult& r = out.result;
  switch (e.kind) {
    case VnExpr::Kind::Diffuse:
      r.value = Rational(1);
      r.regular = true;
      r.rule_trace.push_back("hyperfinite");
      out.hyperfinite = out.diffuse_factor = true;
      return out;
    case VnExpr::Kind::Hyperfinite: {
      out.hyperfinite = true;
      r.regular = true;
      if (e.algebra) {
        r.value = delta0_hyperfinite(*e.algebra);
        r.rule_trace.push_back("hyperfinite");
        out.diffuse_factor = e.algebra->diffuse_weight() == 1;
        return out;
      }
      const std::filesystem::path path = std::filesystem::path(e.path).is_absolute()
                                             ? std::filesystem::path(e.path)
                                             : options.base_dir / e.path;
      const Json j = load_json_file(path);
      if (is_bs_json(j)) {
        const BsConstruction c = bs_from_json(j);
        const TensorSequenceEnclosure enc = evaluate_bs(c, options.tol);
        if (enc.tail_trivial) {
          r.value = Rational(Rational(1) - enc.partial_product);
        } else {
          r.value = enc.delta0;
        }
        r.rule_trace.push_back("tensor-sequence-enclosure");
        r.assumptions.push_back("every factor beyond the stored prefix obeys the stored tail schedule");
        return out;
      }
      const FdAlgebra a = algebra_from_json(j);
      r.value = delta0_hyperfinite(a);
      r.rule_trace.push_back("hyperfinite");
      out.diffuse_factor = a.diffuse_weight() == 1;
      return out;
    }
    case VnExpr::Kind::Bs:
      r.value = Rational(Rational(2) - e.value);
      r.regular = true;
      r.rule_trace.push_back("bs-identity");
      r.assumptions.push_back("B_s is realised by a tensor sequence whose product is exactly s - 1");
      out.hyperfinite = true;
      return out;
    case VnExpr::Kind::Amalgam: {
      const Eval a = eval(*e.left, options);
      const Eval b = eval(*e.right, options);
      const Eval base = eval(*e.over, options);
      for (const Eval* part : {&a, &b, &base}) {
        merge(r.rule_trace, part->result.rule_trace);
        merge(r.assumptions, part->result.assumptions);
      }
      add_unique(r.assumptions, "the base algebra embeds trace-compatibly in both factors");
      add_unique(r.assumptions, "both factors embed in R^omega");
      if (a.diffuse_factor && b.diffuse_factor) {
        r.value = minus(Rational(2), base.result.value);
        r.regular = true;
        add_unique(r.rule_trace, "amalgam-hyperfinite-pair");
      } else if (a.hyperfinite || b.hyperfinite) {
        const Eval& other = a.hyperfinite ? b : a;
        r.value = minus(plus(a.result.value, b.result.value), base.result.value);
        r.regular = other.result.regular;
        add_unique(r.rule_trace, "amalgam-hyperfinite-side");
      } else if (a.result.regular && b.result.regular) {
        r.value = minus(plus(a.result.value, b.result.value), base.result.value);
        r.regular = true;
        add_unique(r.rule_trace, "amalgam-regular");
      } else {
        const VnExpr& bad = a.result.regular ? *e.right : *e.left;
        throw InapplicableError("amalgam-vn: neither factor is hyperfinite and " + print(bad) +
                                " is not known to be regular");
      }
      return out;
    }
    case VnExpr::Kind::Corner: {
      const Eval inner = eval(*e.left, options);
      const Rational inv = Rational(1) / (e.value * e.value);
      r.value = plus(Rational(Rational(1) - inv), times(inv, inner.result.value));
      r.regular = e.value == 1 && inner.result.regular;
      r.rule_trace = inner.result.rule_trace;
      add_unique(r.rule_trace, "corner-scaling");
      r.assumptions = inner.result.assumptions;
      add_unique(r.assumptions, "a hyperfinite subset of the first generating set contains the matrix units of p");
      out.hyperfinite = inner.hyperfinite && e.value == 1;
      out.diffuse_factor = inner.diffuse_factor && e.value == 1;
      return out;
    }
    case VnExpr::Kind::Group: {
      const GroupPtr g = desugar(e.group);
      betti_core(*g);
      const GroupDelta0 d = delta0_core(*g);
      r.value = d.value;
      r.regular = true;
      r.rule_trace = d.rule_trace;
      add_unique(r.rule_trace, "group-class-a");
      r.assumptions = d.assumptions;
      return out;
    }
  }
  throw InvalidArgument("unknown expression kind");
}

}  // namespace

Betti betti(const GroupExpr& g) { return betti_core(*desugar(std::make_shared<GroupExpr>(g))); }

Rational delta_star(const GroupExpr& g) {
  const Betti b = betti(g);
  return b.beta1 - b.beta0 + 1;
}

GroupDelta0 delta0_group(const GroupExpr& g) { return delta0_core(*desugar(std::make_shared<GroupExpr>(g))); }

GroupInvariants group_invariants(const GroupExpr& g) {
  const GroupPtr core = desugar(std::make_shared<GroupExpr>(g));
  const Betti b = betti_core(*core);
  GroupInvariants inv;
  inv.order = b.order;
  inv.beta0 = b.beta0;
  inv.beta1 = b.beta1;
  inv.delta_star = b.beta1 - b.beta0 + 1;
  inv.assumptions.push_back(kSubgroupEmbeds);
  try {
    const GroupDelta0 d = delta0_core(*core);
    inv.delta0 = d.value;
    inv.in_class_a = true;
    inv.regular = true;
    inv.rule_trace = d.rule_trace;
    merge(inv.assumptions, d.assumptions);
  } catch (const InapplicableError& e) {
    inv.delta0_note = e.what();
  }
  return inv;
}

Json to_json(const GroupInvariants& inv) {
  Json j;
  j["order"] = order_string(inv.order);
  j["beta0"] = to_string(inv.beta0);
  j["beta1"] = to_string(inv.beta1);
  j["deltaStar"] = to_string(inv.delta_star);
  j["delta0"] = inv.delta0 ? Json(to_string(*inv.delta0)) : Json(nullptr);
  j["regular"] = inv.regular;
  j["inClassA"] = inv.in_class_a;
  j["ruleTrace"] = inv.rule_trace;
  j["assumptions"] = inv.assumptions;
  if (!inv.delta0_note.empty()) j["delta0Note"] = inv.delta0_note;
  return j;
}

DimResult delta0_vn(const VnExpr& e, const VnOptions& options) { return eval(e, options).result; }

Json dim_value_json(const DimValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return to_string(*r);
  return interval_to_json(std::get<Interval>(v));
}

std::string to_string(const DimValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return to_string(*r);
  const Interval& i = std::get<Interval>(v);
  return "[" + format_decimal(i.lo) + ", " + format_decimal(i.hi) + "]";
}

bool contains(const DimValue& v, const Rational& x) {
  if (const auto* r = std::get_if<Rational>(&v)) return *r == x;
  return std::get<Interval>(v).contains(x);
}

Json to_json(const DimResult& r) {
  Json j;
  j["delta0"] = dim_value_json(r.value);
  j["exact"] = std::holds_alternative<Rational>(r.value);
  j["regular"] = r.regular;
  j["ruleTrace"] = r.rule_trace;
  j["assumptions"] = r.assumptions;
  return j;
}

}  // namespace freedim
