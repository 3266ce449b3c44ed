#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace freedim {

/// Node of a parsed S-expression: an atom or a parenthesised list.
/// `column` is 1-based and points at the atom or the opening parenthesis.
struct SNode {
  bool is_list = false;
  std::string atom;
  bool quoted = false;  ///< atom came from a "..." string
  std::vector<SNode> items;
  std::size_t column = 1;

  bool is_atom(std::string_view text) const { return !is_list && !quoted && atom == text; }
  /// Head symbol of a non-empty list, or "".
  std::string_view head() const;
};

/// Parses exactly one S-expression; trailing input is an error. Throws
/// ParseError with the offending column.
SNode parse_sexpr(std::string_view text);

/// Renders an atom, quoting it when it would not re-read as a bare atom.
std::string print_atom(const std::string& atom);

}  // namespace freedim
