// Tiny arithmetic evaluator for angle arguments on the command line, e.g.
// "pi*sqrt(3)/6" or "2*pi/7". Supports numbers, pi, sqrt, the four basic
// operators, unary minus and parentheses.
#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tribilliard/geometry.hpp"

namespace tribilliard {

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  double parse() {
    const double v = expression();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) + ": " +
                                what + " in '" + std::string(src_) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool consume_word(std::string_view w) {
    skip_ws();
    if (src_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
      return false;
    }
    pos_ = end;
    return true;
  }

  double expression() {
    double v = term();
    for (;;) {
      if (consume('+')) {
        v += term();
      } else if (consume('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (consume('*')) {
        v *= unary();
      } else if (consume('/')) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (consume('-')) return -unary();
    return primary();
  }

  double primary() {
    skip_ws();
    if (consume_word("pi")) return pi;
    if (consume_word("sqrt")) {
      if (!consume('(')) fail("expected '(' after sqrt");
      const double v = expression();
      if (!consume(')')) fail("expected ')'");
      if (v < 0.0) fail("sqrt of negative value");
      return std::sqrt(v);
    }
    if (consume('(')) {
      const double v = expression();
      if (!consume(')')) fail("expected ')'");
      return v;
    }
    return number();
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
            src_[pos_] == 'e' || src_[pos_] == 'E' ||
            ((src_[pos_] == '+' || src_[pos_] == '-') && pos_ > start &&
             (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a number, 'pi', 'sqrt' or '('");
    const std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) fail("malformed number '" + text + "'");
      return v;
    } catch (const std::invalid_argument&) {
      fail("malformed number '" + text + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range '" + text + "'");
    }
  }
};

}  // namespace detail

/// Evaluate an arithmetic expression; throws std::invalid_argument with the
/// offending position on malformed input.
inline double eval_expr(std::string_view src) { return detail::ExprParser(src).parse(); }

}  // namespace tribilliard
