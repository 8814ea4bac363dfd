#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rl/setexpr.hpp"

namespace rl {

using PredicateRegistry = std::map<std::string, std::function<bool(const Element&)>>;

namespace detail {

// Recursive descent over the set grammar in docs/dsl.md; one token of
// lookahead except for the "(x,y)>" translator on Z2.
class SetParser {
 public:
  SetParser(Kind k, std::string_view text, const PredicateRegistry* reg) : amb_(k), s_(text), reg_(reg) {}

  SetExpr parse() {
    auto e = expr();
    ws();
    if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  Ambient amb_;
  std::string_view s_;
  const PredicateRegistry* reg_;
  std::size_t i_ = 0;

  [[noreturn]] void error(const std::string& m) const { fail(ErrorKind::parse, "column " + std::to_string(i_ + 1) + ": " + m); }

  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  SetExpr expr() {
    std::vector<SetExpr> xs{inter()};
    while (eat('|')) xs.push_back(inter());
    return unite(std::move(xs));
  }
  SetExpr inter() {
    std::vector<SetExpr> xs{unary()};
    while (eat('&')) xs.push_back(unary());
    return intersect(std::move(xs));
  }

  SetExpr unary() {
    if (eat('!')) return complement(unary());
    auto save = i_;
    if (auto g = translator_prefix()) {
      char op = s_[i_++];
      auto child = unary();
      return op == '>' ? translate(*g, child) : pre_translate(*g, child);
    }
    i_ = save;
    return prim();
  }

  // An element immediately followed by '>' or '<', or nothing (position restored by caller).
  std::optional<Element> translator_prefix() {
    auto c = peek();
    auto start = i_;
    std::string text;
    switch (amb_.kind()) {
      case Kind::N0:
      case Kind::Z:
        if (!(std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))))
          return std::nullopt;
        break;
      case Kind::Z2:
        if (c != '(') return std::nullopt;
        break;
      case Kind::F2:
        if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
        break;
    }
    if (!try_element_text(text)) {
      i_ = start;
      return std::nullopt;
    }
    auto n = peek();
    if (n != '>' && n != '<') {
      i_ = start;
      return std::nullopt;
    }
    return element_from(text, start);
  }

  // Lexes the text of one element without interpreting it.
  bool try_element_text(std::string& out) {
    ws();
    auto start = i_;
    switch (amb_.kind()) {
      case Kind::N0:
      case Kind::Z:
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        break;
      case Kind::Z2: {
        if (i_ >= s_.size() || s_[i_] != '(') return false;
        auto close = s_.find(')', i_);
        if (close == std::string_view::npos) return false;
        auto inner = s_.substr(i_ + 1, close - i_ - 1);
        for (char ch : inner)
          if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == ',' || std::isspace(static_cast<unsigned char>(ch))))
            return false;
        i_ = close + 1;
        break;
      }
      case Kind::F2:
        while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
        break;
    }
    if (i_ == start) return false;
    out = std::string(s_.substr(start, i_ - start));
    if (amb_.kind() == Kind::F2 && out != "e" && out.find_first_not_of("aAbB") != std::string::npos) return false;
    if (amb_.kind() == Kind::Z2) out.erase(std::remove_if(out.begin(), out.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }), out.end());
    return true;
  }

  Element element_from(const std::string& text, std::size_t at) {
    try {
      return amb_.parse_element(text);
    } catch (const Error& e) {
      i_ = at;
      error(e.what());
    }
  }

  Element element() {
    std::string t;
    auto at = i_;
    if (!try_element_text(t)) error(std::string("expected a ") + to_string(amb_.kind()) + " element");
    return element_from(t, at);
  }

  std::int64_t integer() {
    ws();
    auto start = i_;
    if (i_ < s_.size() && s_[i_] == '-') ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::int64_t v;
    if (!Ambient::parse_int(s_.substr(start, i_ - start), v)) {
      i_ = start;
      error("expected an integer");
    }
    return v;
  }

  std::vector<Element> braced_elements(bool allow_empty) {
    expect('{');
    std::vector<Element> out;
    if (eat('}')) {
      if (!allow_empty) error("empty finite set disallowed");
      return out;
    }
    do out.push_back(element());
    while (eat(','));
    expect('}');
    return out;
  }

  std::string ident() {
    ws();
    auto start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  template <class F>
  SetExpr guarded(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::parse) throw;
      i_ = at;
      error(e.what());
    }
  }

  SetExpr prim() {
    if (eat('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    auto at = i_;
    auto id = ident();
    if (id.empty()) error(peek() ? "unexpected '" + std::string(1, peek()) + "'" : "unexpected end of input");
    if (id == "full") return full(amb_.kind());
    if (id == "empty") return empty(amb_.kind());
    if (id == "evenlen") return even_length(amb_.kind());
    if (!eat(':')) {
      i_ = at;
      error("unknown set '" + id + "'");
    }
    auto k = amb_.kind();
    if (id == "ep") {
      auto off = integer();
      expect(',');
      auto per = integer();
      expect(',');
      expect('{');
      std::set<std::int64_t> rs;
      if (!eat('}')) {
        do rs.insert(integer());
        while (eat(','));
        expect('}');
      }
      return guarded(at, [&] { return eventually_periodic(k, off, per, rs); });
    }
    if (id == "fin") {
      auto xs = braced_elements(false);
      return guarded(at, [&] { return finite(k, xs); });
    }
    if (id == "win") {
      auto lvl = integer();
      expect(',');
      auto xs = braced_elements(true);
      return guarded(at, [&] { return windowed(k, lvl, xs); });
    }
    if (id == "fs" || id == "fp") {
      std::vector<Element> gs;
      do gs.push_back(element());
      while (eat(','));
      return guarded(at, [&] { return id == "fs" ? fs_set(k, gs) : fp_set(k, gs); });
    }
    if (id == "dil" || id == "infl" || id == "ctr") {
      auto c = integer();
      expect(',');
      auto child = unary();
      return guarded(at, [&] { return id == "dil" ? dilation(c, child) : id == "infl" ? inflate(c, child) : contract(c, child); });
    }
    if (id == "rtr" || id == "rpre") {
      auto g = element();
      expect(',');
      auto child = unary();
      return guarded(at, [&] { return id == "rtr" ? right_translate(g, child) : right_pre_translate(g, child); });
    }
    if (id == "blk" || id == "fsb") {
      auto b = integer();
      expect(',');
      auto c = integer();
      if (id == "blk") return guarded(at, [&] { return blocks_linear(k, b, c); });
      expect(',');
      auto kmin = integer();
      return guarded(at, [&] { return fs_blocks(k, b, c, kmin); });
    }
    if (id == "blkg") {
      auto b = integer();
      expect(',');
      auto p = integer();
      expect(',');
      auto q = integer();
      return guarded(at, [&] { return blocks_geometric(k, b, p, q); });
    }
    if (id == "pred") {
      auto name = ident();
      if (!reg_ || !reg_->count(name)) {
        i_ = at;
        error("predicate '" + name + "' is not registered");
      }
      return predicate(k, name, reg_->at(name));
    }
    i_ = at;
    error("unknown set constructor '" + id + ":'");
  }
};

}  // namespace detail

inline SetExpr parse_set(Kind k, std::string_view text, const PredicateRegistry* reg = nullptr) {
  return detail::SetParser(k, text, reg).parse();
}

}  // namespace rl
