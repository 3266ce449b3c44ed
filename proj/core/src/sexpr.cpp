#include "fdim/sexpr.hpp"

#include "fdim/errors.hpp"

#include <cctype>

namespace freedim {

namespace {

bool bare_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SNode read_top() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", column());
    SNode node = read();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", column());
    return node;
  }

 private:
  std::size_t column() const { return pos_ + 1; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  SNode read() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", column());
    SNode node;
    node.column = column();
    const char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", column());
    if (c == '(') {
      node.is_list = true;
      ++pos_;
      for (;;) {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("unclosed '(' opened at column " + std::to_string(node.column), column());
        if (text_[pos_] == ')') {
          ++pos_;
          return node;
        }
        node.items.push_back(read());
      }
    }
    if (c == '"') {
      ++pos_;
      node.quoted = true;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        node.atom += text_[pos_++];
      }
      if (pos_ == text_.size()) throw ParseError("unterminated string", node.column);
      ++pos_;
      return node;
    }
    while (pos_ < text_.size() && bare_char(text_[pos_])) node.atom += text_[pos_++];
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view SNode::head() const {
  if (!is_list || items.empty() || items.front().is_list || items.front().quoted) return {};
  return items.front().atom;
}

SNode parse_sexpr(std::string_view text) { return Reader(text).read_top(); }

std::string print_atom(const std::string& atom) {
  bool bare = !atom.empty();
  for (char c : atom) bare = bare && bare_char(c) && c != '\\';
  if (bare) return atom;
  std::string out = "\"";
  for (char c : atom) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace freedim
