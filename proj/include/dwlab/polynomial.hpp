// Real polynomials in the field values and the potential-expression parser.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | symbol | '(' expr ')'
//   symbol  := 'phi' digits      field index, 1-based (phi1, phi2, ...)
//            | 'phi'             alias for phi1 when there is one field
// Example: "0.5*phi1^2 + 0.25 * phi1^2*phi2^2 - 3"
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dwlab/errors.hpp"

namespace dwlab {

class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_vars_(n_vars) {}

  static Polynomial constant(int n_vars, double c) {
    Polynomial p(n_vars);
    p.add_term(Exponents(static_cast<std::size_t>(n_vars), 0), c);
    return p;
  }
  static Polynomial variable(int n_vars, int index) {
    Polynomial p(n_vars);
    Exponents e(static_cast<std::size_t>(n_vars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    p.add_term(e, 1.0);
    return p;
  }

  int n_vars() const { return n_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  void add_term(const Exponents& e, double coeff) {
    if (static_cast<int>(e.size()) != n_vars_) throw UsageError("monomial arity mismatch");
    for (int k : e) {
      if (k < 0) throw ConfigError("negative exponent in polynomial term");
    }
    if (coeff == 0.0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  bool all_finite() const {
    for (const auto& [e, c] : terms_) {
      if (!std::isfinite(c)) return false;
    }
    return true;
  }

  double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (std::size_t v = 0; v < e.size(); ++v) {
        for (int k = 0; k < e[v]; ++k) m *= x[v];
      }
      sum += m;
    }
    return sum;
  }

  Polynomial derivative(int var) const {
    Polynomial d(n_vars_);
    for (const auto& [e, c] : terms_) {
      const int k = e[static_cast<std::size_t>(var)];
      if (k == 0) continue;
      Exponents de = e;
      de[static_cast<std::size_t>(var)] = k - 1;
      d.add_term(de, c * k);
    }
    return d;
  }

  std::vector<double> gradient(std::span<const double> x) const {
    std::vector<double> g(static_cast<std::size_t>(n_vars_));
    for (int v = 0; v < n_vars_; ++v) g[static_cast<std::size_t>(v)] = derivative(v)(x);
    return g;
  }

  /// Coefficients c_k of a one-variable polynomial, sum c_k x^k.
  std::vector<double> univariate_coefficients() const {
    if (n_vars_ != 1) throw UsageError("univariate_coefficients needs a one-field polynomial");
    std::vector<double> c(static_cast<std::size_t>(degree() + 1), 0.0);
    for (const auto& [e, v] : terms_) c[static_cast<std::size_t>(e[0])] = v;
    return c;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r(a.n_vars_);
    for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  bool operator==(const Polynomial&) const = default;

  /// Canonical text form, terms in ascending exponent order: "0.5*phi1^2 + 0.25*phi1^4".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // Graded order: by total degree, then lexicographic.
    std::vector<std::pair<Exponents, double>> sorted(terms_.begin(), terms_.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
      int dx = 0, dy = 0;
      for (int k : x.first) dx += k;
      for (int k : y.first) dy += k;
      return dx < dy;
    });
    for (const auto& [e, c] : sorted) {
      double mag = c;
      if (!first) {
        out += c < 0 ? " - " : " + ";
        mag = std::fabs(c);
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", mag);
      out += buf;
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        out += "*phi" + std::to_string(v + 1);
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
      }
      first = false;
    }
    return out;
  }

 private:
  int n_vars_ = 0;
  std::map<Exponents, double> terms_;
};

namespace detail {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, int n_fields) : text_(text), n_fields_(n_fields) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression");
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("potential expression: " + msg + " at column " + std::to_string(pos_ + 1) +
                      " in \"" + std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+')) {
        p = p + term();
      } else if (accept('-')) {
        p = p - term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (accept('*')) p = p * unary();
    return p;
  }

  Polynomial unary() {
    if (accept('-')) return (-1.0) * unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (k > 64) fail("exponent too large");
    Polynomial r = Polynomial::constant(n_fields_, 1.0);
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("missing ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return symbol();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Polynomial number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return Polynomial::constant(n_fields_, v);
  }

  Polynomial symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name.rfind("phi", 0) != 0) {
      pos_ = start;
      fail("unknown symbol '" + name + "'");
    }
    const std::string digits = name.substr(3);
    int index = 1;
    if (digits.empty()) {
      if (n_fields_ != 1) {
        pos_ = start;
        fail("'phi' is only allowed with one field; use phi1..phi" + std::to_string(n_fields_));
      }
    } else {
      for (char d : digits) {
        if (!std::isdigit(static_cast<unsigned char>(d))) {
          pos_ = start;
          fail("unknown symbol '" + name + "'");
        }
      }
      index = std::stoi(digits);
    }
    if (index < 1 || index > n_fields_) {
      pos_ = start;
      fail("field symbol '" + name + "' out of range 1.." + std::to_string(n_fields_));
    }
    return Polynomial::variable(n_fields_, index - 1);
  }

  std::string_view text_;
  int n_fields_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, int n_fields) {
  if (n_fields < 1) throw ConfigError("n_fields must be >= 1");
  return detail::PolynomialParser(text, n_fields).parse();
}

}  // namespace dwlab
