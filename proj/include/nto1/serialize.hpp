#pragma once

// Text and JSON forms of fields, elements, polynomials and reports, plus the
// versioned CSV tables emitted by sweeps.

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nto1/error.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/nto1_check.hpp"
#include "nto1/poly.hpp"

namespace nto1 {

using Json = nlohmann::ordered_json;

// --- fields --------------------------------------------------------------------------

inline Json field_to_json(const Field& F) {
  return Json{{"p", F.p()}, {"m", F.m()}, {"modulus", F.modulus()}, {"beta", F.code(F.beta())}};
}

namespace detail {

inline std::uint64_t parse_uint(std::string_view s, const char* what) {
  if (s.empty()) fail(ErrorKind::ParseError, std::string("empty ") + what);
  std::uint64_t v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail(ErrorKind::ParseError, std::string("bad ") + what + ": " + std::string(s));
    if (v > (UINT64_MAX - 9) / 10) fail(ErrorKind::ParseError, std::string(what) + " overflows");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline Field field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("m")) fail(ErrorKind::ParseError, "field JSON needs p and m");
  try {
    std::optional<std::vector<std::uint32_t>> mod;
    if (j.contains("modulus")) mod = j.at("modulus").get<std::vector<std::uint32_t>>();
    Field F = Field::make(j.at("p").get<std::uint64_t>(), j.at("m").get<unsigned>(), mod);
    if (j.contains("beta") && j.at("beta").get<std::uint64_t>() != F.code(F.beta()))
      fail(ErrorKind::ParseError, "beta differs from the first primitive element in code order");
    return F;
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, std::string("field JSON: ") + e.what());
  }
}

}  // namespace detail

/// "p=3,m=3" (optionally ",modulus=2:2:0:1" low-to-high) or a JSON object.
inline Field parse_field(std::string_view spec) {
  const std::string s = detail::trim(spec);
  if (!s.empty() && s.front() == '{') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::exception& e) {
      fail(ErrorKind::ParseError, std::string("field JSON: ") + e.what());
    }
    return detail::field_from_json(j);
  }
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, "expected key=value in field spec: " + item);
    kv[detail::trim(item.substr(0, eq))] = detail::trim(item.substr(eq + 1));
  }
  if (!kv.count("p") || !kv.count("m")) fail(ErrorKind::ParseError, "field spec needs p and m");
  for (const auto& [k, v] : kv)
    if (k != "p" && k != "m" && k != "modulus") fail(ErrorKind::ParseError, "unknown field key: " + k);
  std::optional<std::vector<std::uint32_t>> mod;
  if (kv.count("modulus")) {
    mod.emplace();
    std::stringstream ms(kv["modulus"]);
    while (std::getline(ms, item, ':')) mod->push_back(static_cast<std::uint32_t>(detail::parse_uint(item, "modulus")));
  }
  return Field::make(detail::parse_uint(kv["p"], "p"), static_cast<unsigned>(detail::parse_uint(kv["m"], "m")), mod);
}

// --- elements ------------------------------------------------------------------------

inline Json element_to_json(const Field& F, const Element& x) { return Json(F.coeffs(x)); }

inline Element element_from_json(const Field& F, const Json& j) {
  try {
    if (j.is_number_unsigned() || j.is_number_integer()) return F.from_int(j.get<std::int64_t>());
    if (j.is_array()) return F.from_coeffs(j.get<std::vector<std::int64_t>>());
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, std::string("element JSON: ") + e.what());
  }
  fail(ErrorKind::ParseError, "element must be an integer or a coefficient array");
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const Field& F, std::string_view text) : F_(F), s_(text) {}

  PolyMap parse() {
    std::vector<Term> terms;
    skip();
    if (at_end()) fail(ErrorKind::ParseError, "empty polynomial");
    bool negate = false;
    if (peek() == '-' || peek() == '+') {
      negate = get() == '-';
    }
    for (;;) {
      Term t = term();
      if (negate) t.coeff = F_.neg(t.coeff);
      terms.push_back(t);
      skip();
      if (at_end()) break;
      const char op = get();
      if (op != '+' && op != '-') fail(ErrorKind::ParseError, std::string("unexpected '") + op + "' in polynomial");
      negate = op == '-';
    }
    return PolyMap::from_terms(F_, terms);
  }

 private:
  // term := factor ('*' factor)*, factor := integer | b['^' k] | x['^' k]
  Term term() {
    Element c = F_.one();
    std::uint64_t e = 0;
    for (;;) {
      skip();
      if (at_end()) fail(ErrorKind::ParseError, "dangling operator in polynomial");
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        c = F_.mul(c, F_.from_int(static_cast<std::int64_t>(number() % F_.p())));
      } else if (ch == 'x' || ch == 'X') {
        get();
        e += exponent();
      } else if (ch == 'b') {
        get();
        c = F_.mul(c, F_.pow(F_.beta(), exponent()));
      } else {
        fail(ErrorKind::ParseError, std::string("unexpected '") + ch + "' in polynomial");
      }
      skip();
      if (!at_end() && peek() == '*') {
        get();
        continue;
      }
      return {e, c};
    }
  }

  std::uint64_t exponent() {
    skip();
    if (at_end() || peek() != '^') return 1;
    get();
    skip();
    return number();
  }

  std::uint64_t number() {
    std::size_t start = i_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    return parse_uint(s_.substr(start, i_ - start), "integer");
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++i_;
  }
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  char get() { return s_[i_++]; }

  const Field& F_;
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Element spec: integer code, "b^k" for a power of beta, or a JSON coefficient array.
inline Element parse_element(const Field& F, std::string_view spec) {
  const std::string s = detail::trim(spec);
  if (s.empty()) fail(ErrorKind::ParseError, "empty element");
  if (s.front() == '[') {
    try {
      return element_from_json(F, Json::parse(s));
    } catch (const Json::exception& e) {
      fail(ErrorKind::ParseError, std::string("element JSON: ") + e.what());
    }
  }
  if (s.front() == 'b') {
    const auto caret = s.find('^');
    if (s == "b") return F.beta();
    if (caret != 1) fail(ErrorKind::ParseError, "expected b^k: " + s);
    return F.pow(F.beta(), detail::parse_uint(s.substr(2), "beta exponent"));
  }
  return F.from_code(detail::parse_uint(s, "element code"));
}

/// "x^3 + 2*x^2 + b^5*x + 1" (integer coefficients live in the prime field,
/// "b^k" is a power of beta) or a JSON array of [exponent, element] pairs.
inline PolyMap parse_poly(const Field& F, std::string_view text) {
  const std::string s = detail::trim(text);
  if (!s.empty() && s.front() == '[') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::exception& e) {
      fail(ErrorKind::ParseError, std::string("polynomial JSON: ") + e.what());
    }
    if (!j.is_array()) fail(ErrorKind::ParseError, "polynomial JSON must be an array");
    std::vector<Term> terms;
    for (const auto& t : j) {
      if (!t.is_array() || t.size() != 2 || !t[0].is_number_unsigned())
        fail(ErrorKind::ParseError, "polynomial term must be [exponent, element]");
      terms.push_back({t[0].get<std::uint64_t>(), element_from_json(F, t[1])});
    }
    return PolyMap::from_terms(F, terms);
  }
  return detail::PolyParser(F, s).parse();
}

inline Json poly_to_json(const PolyMap& f) {
  Json out = Json::array();
  for (const auto& t : f.terms()) out.push_back(Json::array({t.exp, element_to_json(f.field(), t.coeff)}));
  return out;
}

// --- reports -------------------------------------------------------------------------

/// {"n", "exception": [element, count] or null, "domain_size", "irregular"}.
inline Json report_to_json(const Field& F, const NTo1Report<std::uint64_t>& r) {
  Json j{{"n", r.n}, {"exception", nullptr}, {"domain_size", r.domain_size}, {"irregular", r.irregular()}};
  if (r.exception) j["exception"] = Json::array({element_to_json(F, F.from_code(r.exception->first)), r.exception->second});
  if (r.irregular()) j["conflict"] = r.conflict;
  return j;
}

// --- CSV -----------------------------------------------------------------------------

struct CsvTable {
  std::string schema;  // e.g. "de3p3/1"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) fail(ErrorKind::InvalidArgument, "CSV row width differs from header");
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::string out = "#schema=" + schema + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

}  // namespace nto1
