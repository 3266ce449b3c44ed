#pragma once

#include <fdim/errors.hpp>
#include <fdim/group_expr.hpp>

#include <random>

namespace freedim::testing {

/// Random group expressions that stay inside class A: amalgams are taken
/// over amenable groups only, products only of infinite groups.
class ClassAGenerator {
 public:
  explicit ClassAGenerator(std::uint64_t seed) : g_(seed) {}

  GroupPtr operator()(int depth) {
    if (depth <= 1 || pick(0, 9) < 3) return leaf();
    if (pick(0, 3) == 0) return make_product(infinite(depth - 1), infinite(depth - 1));
    return amalgam(depth);
  }

 private:
  std::mt19937_64 g_;

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }

  GroupPtr leaf() {
    switch (pick(0, 6)) {
      case 0:
        return make_amenable(Integer(pick(1, 12)));
      case 1:
        return make_amenable(std::nullopt);
      case 2:
        return make_property_t();
      case 3:
        return make_free_group(pick(1, 5));
      case 4:
        return make_surface(pick(2, 4));
      default:
        return make_amenable(Integer(pick(2, 30)));
    }
  }

  GroupPtr infinite(int depth) {
    for (;;) {
      GroupPtr g = (*this)(depth);
      if (!group_order(*g)) return g;
    }
  }

  GroupPtr amalgam(int depth) {
    const int h = pick(0, 4);
    GroupPtr over = h == 4 ? make_amenable(std::nullopt) : make_amenable(Integer(h + 1));
    auto side = [&]() -> GroupPtr {
      for (int attempt = 0; attempt < 20; ++attempt) {
        GroupPtr g = (*this)(depth - 1);
        const auto ord = group_order(*g);
        if (print(*g) == print(*over)) continue;
        if (!ord) return g;
        if (!over->order) continue;
        if (*ord % *over->order == 0 && *ord > *over->order) return g;
      }
      return over->order ? make_amenable(*over->order * pick(2, 4)) : make_free_group(2);
    };
    for (;;) {
      try {
        return make_amalgam(side(), side(), over);
      } catch (const InvalidArgument&) {
      }
    }
  }
};

}  // namespace freedim::testing
