#include "smoothcvx/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "smoothcvx/errors.hpp"

namespace smoothcvx {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
    if (text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-';
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t i = pos_;
    const auto digit = [&](std::size_t k) {
      return k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]));
    };
    if (i < text_.size() && (text_[i] == '+' || text_[i] == '-')) ++i;
    std::size_t mantissa = 0;
    while (digit(i)) ++i, ++mantissa;
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      while (digit(i)) ++i, ++mantissa;
    }
    if (mantissa == 0) fail("expected a number");
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
      if (!digit(j)) {
        pos_ = j;
        fail("malformed exponent");
      }
      while (digit(j)) ++j;
      i = j;
    }
    const std::string token(text_.substr(start, i - start));
    pos_ = i;
    return std::strtod(token.c_str(), nullptr);
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr expr() {
    std::vector<NodePtr> terms{term()};
    while (peek('+')) {
      ++pos_;
      terms.push_back(term());
    }
    if (terms.size() == 1) return terms.front();
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Sum;
    n->children = std::move(terms);
    return n;
  }

  NodePtr term() {
    if (at_number()) {
      const double c = number();
      expect('*');
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Scale;
      n->scalar = c;
      n->children.push_back(atom());
      return n;
    }
    return atom();
  }

  void linear(Node& n) {
    n.coeffs.push_back(number());
    while (peek(',')) {
      ++pos_;
      n.coeffs.push_back(number());
    }
    expect(';');
    n.offset = number();
  }

  NodePtr atom() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string name = identifier();
    if (name.empty()) fail("expected an atom");
    auto n = std::make_shared<Node>();
    expect('(');
    if (name == "affine" || name == "abs" || name == "softplus") {
      n->kind = name == "affine" ? NodeKind::Affine : name == "abs" ? NodeKind::Abs : NodeKind::Softplus;
      linear(*n);
    } else if (name == "norm" || name == "sqnorm") {
      n->kind = name == "norm" ? NodeKind::Norm : NodeKind::SqNorm;
    } else if (name == "max") {
      n->kind = NodeKind::Max;
      n->children.push_back(expr());
      expect(',');
      n->children.push_back(expr());
    } else if (name == "pow") {
      n->kind = NodeKind::Pow;
      n->children.push_back(expr());
      expect(',');
      n->scalar = number();
    } else if (name == "exp" || name == "recip1m") {
      n->kind = name == "exp" ? NodeKind::Exp : NodeKind::Recip1m;
      n->children.push_back(expr());
    } else {
      pos_ = start;
      fail("unknown atom '" + name + "'");
    }
    expect(')');
    return n;
  }
};

}  // namespace

ConvexExpr parse_expr(std::string_view text, const Domain& domain) {
  return ConvexExpr(Parser(text).parse(), domain);
}

}  // namespace smoothcvx
