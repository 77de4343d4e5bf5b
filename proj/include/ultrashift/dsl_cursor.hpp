// Character cursor for the .ug text format: whitespace and `#` comments,
// words, integers, affine indices, index sets.
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/index_set.hpp"

namespace ultrashift::dsl {

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& msg, std::string hint)
      : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + msg +
                        (hint.empty() ? "" : " (hint: " + hint + ")")),
        line_(line), column_(column), message_(msg), hint_(std::move(hint)) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::string& hint() const { return hint_; }

 private:
  std::size_t line_, column_;
  std::string message_, hint_;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  [[noreturn]] void fail_at(std::size_t at, ErrorKind k, const std::string& msg, const std::string& hint = "") const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw ParseError(k, line, col, msg, hint);
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& hint = "") {
    ws();
    fail_at(pos_, ErrorKind::Parse, msg, hint);
  }

  void ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool eof() {
    ws();
    return pos_ >= s_.size();
  }
  char peek() {
    ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  /// Raw character at offset, without skipping whitespace.
  char raw(std::size_t off = 0) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }

  bool at(std::string_view t) {
    ws();
    if (s_.substr(pos_, t.size()) != t) return false;
    return !(ident_char(t.back()) && ident_char(raw(t.size())));
  }
  bool accept(std::string_view t) {
    if (!at(t)) return false;
    pos_ += t.size();
    return true;
  }
  void expect(std::string_view t, const std::string& hint = "") {
    if (!accept(t)) fail("expected '" + std::string(t) + "'" + found(), hint);
  }

  std::string found() {
    if (eof()) return ", found end of input";
    std::size_t e = pos_;
    if (ident_char(s_[e]))
      while (e < s_.size() && ident_char(s_[e])) ++e;
    else
      ++e;
    return ", found '" + std::string(s_.substr(pos_, e - pos_)) + "'";
  }

  bool at_ident() { return ident_start(peek()); }
  std::string ident(const std::string& what) {
    if (!at_ident()) fail("expected " + what + found());
    std::size_t b = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  /// Identifier that may also contain '-', for registry names.
  std::string dashed(const std::string& what) {
    if (!at_ident()) fail("expected " + what + found());
    std::size_t b = pos_;
    while (pos_ < s_.size() && (ident_char(s_[pos_]) || s_[pos_] == '-')) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  bool at_int() {
    ws();
    char c = raw();
    return std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && std::isdigit(static_cast<unsigned char>(raw(1))));
  }
  Index integer() {
    if (!at_int()) fail("expected an integer" + found());
    std::size_t b = pos_;
    if (raw() == '-') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(raw()))) ++pos_;
    Index v = 0;
    auto r = std::from_chars(s_.data() + b, s_.data() + pos_, v);
    if (r.ec != std::errc() || v >= kIndexLimit || v <= -kIndexLimit)
      fail_at(b, ErrorKind::Semantic, "integer out of range", "indices are limited to |k| < 2^60");
    return v;
  }

  /// `var`, `-var`, `var+c`, `var-c`, `-var+c` or an integer. An empty
  /// `var` accepts any identifier and stores it in `used`.
  AffineIndexMap affine(const std::string& var, std::string* used = nullptr, bool bracketed = true) {
    ws();
    const std::size_t b = pos_;
    AffineIndexMap m;
    if (at_int()) {
      m = AffineIndexMap::constant(integer());
    } else {
      int sign = 1;
      if (raw() == '-') {
        ++pos_;
        sign = -1;
      }
      if (!at_ident()) fail("expected an index" + found(), "write " + (var.empty() ? std::string("j") : var) + ", " + "-" + (var.empty() ? "j" : var) + "+1 or an integer");
      const std::size_t vb = pos_;
      std::string v = ident("index variable");
      if (!var.empty() && v != var)
        fail_at(vb, ErrorKind::Semantic, "unknown index variable '" + v + "'", "the index variable here is " + var);
      if (used) {
        if (!used->empty() && *used != v)
          fail_at(vb, ErrorKind::Unsupported, "second free index '" + v + "'", "schemas admit one free index");
        *used = v;
      }
      m.scale = sign;
      m.offset = 0;
      ws();
      if ((raw() == '+' || raw() == '-') && std::isdigit(static_cast<unsigned char>(raw(1)))) {
        bool neg = raw() == '-';
        ++pos_;
        Index c = integer();
        m.offset = neg ? -c : c;
      }
    }
    if (!bracketed) return m;
    ws();
    char c = raw();
    if (c == '*' || c == '/' || c == '^' || c == '(' || ident_char(c) ||
        ((c == '+' || c == '-') && !std::isdigit(static_cast<unsigned char>(raw(1)))))
      fail_at(b, ErrorKind::Semantic, "non-affine index", "indices must have the form k, -k, k+c, k-c or c");
    return m;
  }

  /// Union of `N`, `N>=c`, `Z`, `Z*`, `*`, `>=c`, `<=c`, `[a..b]`, `{a, b}`.
  IndexSet index_set() {
    IndexSet r;
    do r = r.unite(index_term());
    while (accept("|"));
    return r;
  }

 private:
  IndexSet index_term() {
    ws();
    if (accept("N")) {
      if (accept(">=")) return IndexSet::at_least(std::max<Index>(integer(), 0));
      return IndexSet::at_least(0);
    }
    if (accept("Z")) {
      if (raw() == '*') {
        ++pos_;
        return IndexSet::at_most(-1).unite(IndexSet::at_least(1));
      }
      return IndexSet::all();
    }
    if (accept("*")) return IndexSet::all();
    if (accept(">=")) return IndexSet::at_least(integer());
    if (accept("<=")) return IndexSet::at_most(integer());
    if (accept("[")) {
      Index a = integer();
      expect("..");
      Index b = integer();
      expect("]");
      if (b < a) fail("empty interval", "write [a..b] with a <= b");
      return IndexSet::range(a, b);
    }
    if (accept("{")) {
      std::vector<Index> ks;
      if (!accept("}")) {
        do ks.push_back(integer());
        while (accept(","));
        expect("}");
      }
      return IndexSet::points(ks);
    }
    fail("expected an index set" + found(), "use N, Z, Z*, N>=c, >=c, <=c, [a..b] or {a, b}");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace ultrashift::dsl
