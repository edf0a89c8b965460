#pragma once

// Sectioned key = value configuration text.
//
//   # comment
//   [section]
//   family   = power_order(rho = 2, C = 1)
//   analyses = coeff_bound, tauberian
//   r_grid   = e^2, e^4, geomspace(1e3, 1e5, 3)
//
// Values are comma-separated items. An item is a number, `e^x` (meaning
// exp(x)), a bare word or path, a "quoted string", or a call name(items...).
// Items may carry a `key =` prefix inside calls.

#include "entire_growth/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace entire_growth::config {

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

inline Error parse_error(Position p, const std::string& msg) {
  return Error(ErrorKind::parse, "line " + std::to_string(p.line) + ", column " + std::to_string(p.column) + ": " + msg);
}

struct Arg;

struct Value {
  enum class Kind { number, word, string, call };
  Kind kind = Kind::word;
  double number = 0.0;
  std::string text;  // word, string contents or call name
  std::vector<Arg> args;
  Position pos;

  bool is_number() const { return kind == Kind::number; }
};

struct Arg {
  std::string key;  // empty for positional items
  Value value;
};

struct Entry {
  std::string key;
  std::string raw;
  Position key_pos;
  Position value_pos;
  std::vector<Arg> items;
};

struct Section {
  std::string name;
  Position pos;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

struct Document {
  std::vector<Section> sections;
};

namespace detail {

inline bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' || c == '-' || c == '+' ||
         c == '~';
}

inline bool ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, Position origin) : s_(text), origin_(origin) {}

  std::vector<Arg> parse_all() {
    auto items = list();
    skip_ws();
    if (i_ < s_.size()) throw parse_error(here(), std::string("unexpected '") + s_[i_] + "'");
    return items;
  }

 private:
  Position here() const { return {origin_.line, origin_.column + i_}; }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  std::vector<Arg> list() {
    std::vector<Arg> out;
    skip_ws();
    if (i_ >= s_.size() || s_[i_] == ')') return out;
    for (;;) {
      out.push_back(item());
      skip_ws();
      if (i_ < s_.size() && s_[i_] == ',') {
        ++i_;
        continue;
      }
      return out;
    }
  }

  Arg item() {
    skip_ws();
    const std::size_t save = i_;
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
      std::size_t k = j;
      while (k < s_.size() && (s_[k] == ' ' || s_[k] == '\t')) ++k;
      if (k < s_.size() && s_[k] == '=') {
        Arg a;
        a.key = std::string(s_.substr(i_, j - i_));
        i_ = k + 1;
        a.value = atom();
        return a;
      }
    }
    i_ = save;
    return Arg{"", atom()};
  }

  Value atom() {
    skip_ws();
    Value v;
    v.pos = here();
    if (i_ >= s_.size()) throw parse_error(here(), "expected a value");
    const char c = s_[i_];
    if (c == '"') {
      const std::size_t end = s_.find('"', i_ + 1);
      if (end == std::string_view::npos) throw parse_error(here(), "unterminated string");
      v.kind = Value::Kind::string;
      v.text = std::string(s_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return v;
    }
    if (c == 'e' && i_ + 1 < s_.size() && s_[i_ + 1] == '^') {
      i_ += 2;
      const Value x = number();
      v.kind = Value::Kind::number;
      v.number = std::exp(x.number);
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))))
      return number();
    if (!word_char(c)) throw parse_error(here(), std::string("unexpected '") + c + "'");
    const std::size_t start = i_;
    while (i_ < s_.size() && word_char(s_[i_])) ++i_;
    v.text = std::string(s_.substr(start, i_ - start));
    std::size_t k = i_;
    while (k < s_.size() && (s_[k] == ' ' || s_[k] == '\t')) ++k;
    if (k < s_.size() && s_[k] == '(') {
      if (!ident(v.text)) throw parse_error(v.pos, "'" + v.text + "' is not a valid name");
      i_ = k + 1;
      v.kind = Value::Kind::call;
      v.args = list();
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != ')') throw parse_error(here(), "expected ')'");
      ++i_;
      return v;
    }
    v.kind = Value::Kind::word;
    return v;
  }

  Value number() {
    skip_ws();
    Value v;
    v.pos = here();
    v.kind = Value::Kind::number;
    std::size_t start = i_;
    if (i_ < s_.size() && s_[i_] == '+') ++start, ++i_;
    std::size_t end = i_;
    if (end < s_.size() && s_[end] == '-') ++end;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                               ((s_[end] == '-' || s_[end] == '+') && (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    const auto tok = s_.substr(start, end - start);
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(x))
      throw parse_error(v.pos, "invalid number '" + std::string(tok) + "'");
    v.number = x;
    i_ = end;
    return v;
  }

  std::string_view s_;
  Position origin_;
  std::size_t i_ = 0;
};

inline std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return s.substr(a, b - a);
}

}  // namespace detail

/// Parses a single value (for tests and command-line overrides).
inline std::vector<Arg> parse_value(std::string_view text, Position origin = {1, 1}) {
  return detail::ValueParser(text, origin).parse_all();
}

inline Document parse(std::string_view text) {
  Document doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (!quoted && (line[i] == '#' || line[i] == ';')) {
        line = line.substr(0, i);
        break;
      }
    }
    std::size_t lead = 0;
    const auto body = detail::trim(line, &lead);
    if (body.empty()) continue;
    const Position start{line_no, lead + 1};

    if (body.front() == '[') {
      if (body.back() != ']') throw parse_error({line_no, lead + body.size() + 1}, "expected ']'");
      const auto name = detail::trim(body.substr(1, body.size() - 2));
      if (!detail::ident(name)) throw parse_error({line_no, lead + 2}, "section name must be an identifier");
      for (const auto& s : doc.sections)
        if (s.name == name)
          throw parse_error(start, "duplicate section [" + std::string(name) + "] (first at line " +
                                       std::to_string(s.pos.line) + ")");
      doc.sections.push_back(Section{std::string(name), start, {}});
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) throw parse_error(start, "expected 'key = value'");
    if (doc.sections.empty()) throw parse_error(start, "key outside of any [section]");
    const auto key = detail::trim(body.substr(0, eq));
    if (!detail::ident(key)) throw parse_error(start, "key must be an identifier");
    auto& sec = doc.sections.back();
    if (const Entry* prev = sec.find(key))
      throw parse_error(start, "duplicate key '" + std::string(key) + "' (first at line " +
                                   std::to_string(prev->key_pos.line) + ")");
    std::size_t vlead = 0;
    const auto raw = detail::trim(body.substr(eq + 1), &vlead);
    const Position vpos{line_no, lead + eq + 1 + vlead + 1};
    if (raw.empty()) throw parse_error(vpos, "missing value for '" + std::string(key) + "'");
    Entry e;
    e.key = std::string(key);
    e.raw = std::string(raw);
    e.key_pos = start;
    e.value_pos = vpos;
    e.items = parse_value(raw, vpos);
    sec.entries.push_back(std::move(e));
  }
  return doc;
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

/// Expands grid items: numbers, linspace(lo, hi, n), geomspace(lo, hi, n)
/// and range(lo, hi, step) (inclusive of hi when it lands on the lattice).
inline std::vector<double> expand_grid(const std::vector<Arg>& items) {
  std::vector<double> out;
  for (const auto& a : items) {
    const Value& v = a.value;
    if (!a.key.empty()) throw parse_error(v.pos, "grid items take no key");
    if (v.is_number()) {
      out.push_back(v.number);
      continue;
    }
    if (v.kind != Value::Kind::call) throw parse_error(v.pos, "expected a number or a grid generator");
    if (v.args.size() != 3) throw parse_error(v.pos, v.text + " takes three arguments");
    for (const auto& x : v.args)
      if (!x.value.is_number() || !x.key.empty()) throw parse_error(x.value.pos, "expected a number");
    const double lo = v.args[0].value.number, hi = v.args[1].value.number, third = v.args[2].value.number;
    if (v.text == "linspace" || v.text == "geomspace") {
      if (!(third >= 2.0) || third != std::floor(third) || third > 1e6)
        throw parse_error(v.args[2].value.pos, "point count must be an integer in [2, 1e6]");
      const auto n = static_cast<std::size_t>(third);
      const bool geo = v.text == "geomspace";
      if (geo && !(lo > 0.0 && hi > 0.0)) throw parse_error(v.pos, "geomspace needs positive bounds");
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        double x = geo ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
        if (i == 0) x = lo;
        if (i + 1 == n) x = hi;
        out.push_back(x);
      }
    } else if (v.text == "range") {
      if (!(third > 0.0)) throw parse_error(v.args[2].value.pos, "range step must be positive");
      const double count = std::floor((hi - lo) / third + 1e-9);
      if (!(count >= 0.0) || count > 1e6) throw parse_error(v.pos, "range is empty or too long");
      for (std::size_t i = 0; i <= static_cast<std::size_t>(count); ++i) out.push_back(lo + static_cast<double>(i) * third);
    } else {
      throw parse_error(v.pos, "unknown grid generator '" + v.text + "'");
    }
  }
  return out;
}

}  // namespace entire_growth::config
