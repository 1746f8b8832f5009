#pragma once

#include <map>
#include <string>
#include <vector>

#include "floq/model.hpp"

namespace floq {

// Polynomial in two noncommuting generators, written 'E' and 'D'. The same
// letters stand for the bold e/d generators of the asymmetric algebra; only
// the rewriting coefficients differ. Words are strings over {E, D}; normal
// form has every E to the left of every D.
struct NCPolynomial {
  std::map<std::string, Rat> terms;

  NCPolynomial() = default;
  explicit NCPolynomial(const Rat& constant) {
    if (constant != 0) terms[""] = constant;
  }
  static NCPolynomial word(const std::string& w, const Rat& coeff = Rat(1)) {
    NCPolynomial p;
    if (coeff != 0) p.terms[w] = coeff;
    return p;
  }

  void add(const std::string& w, const Rat& coeff) {
    if (coeff == 0) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
      terms.emplace(w, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
    }
  }

  bool is_zero() const { return terms.empty(); }

  int degree() const {
    int d = 0;
    for (auto& [w, c] : terms) d = std::max(d, int(w.size()));
    return d;
  }

  NCPolynomial operator+(const NCPolynomial& o) const {
    NCPolynomial r = *this;
    for (auto& [w, c] : o.terms) r.add(w, c);
    return r;
  }
  NCPolynomial operator-(const NCPolynomial& o) const {
    NCPolynomial r = *this;
    for (auto& [w, c] : o.terms) r.add(w, -c);
    return r;
  }
  NCPolynomial operator*(const Rat& s) const {
    NCPolynomial r;
    if (s == 0) return r;
    for (auto& [w, c] : terms) r.terms[w] = c * s;
    return r;
  }
  NCPolynomial operator*(const NCPolynomial& o) const {
    NCPolynomial r;
    for (auto& [w1, c1] : terms)
      for (auto& [w2, c2] : o.terms) r.add(w1 + w2, c1 * c2);
    return r;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto& [w, c] : terms) {
      if (!s.empty()) s += " + ";
      s += to_string(c);
      if (!w.empty()) s += "*" + w;
    }
    return s;
  }
};

// Rewriting rule DE -> q ED + alpha D + beta E + gamma, covering both
// algebras: symmetric DE = ED + D + E, asymmetric de = t^2 ed + (1 - t^2).
struct RewriteRule {
  Rat q, alpha, beta, gamma;
};

inline RewriteRule rewrite_rule(const ModelSpec& m) {
  if (is_asymmetric(m.family)) return {m.t * m.t, Rat(0), Rat(0), Rat(1 - m.t * m.t)};
  return {Rat(1), Rat(1), Rat(1), Rat(0)};
}

// Repeatedly rewrites the leftmost DE factor of every word; terminating and
// confluent for these rules, so the result is the unique normal form.
inline NCPolynomial normal_form(const NCPolynomial& p, const RewriteRule& rule) {
  NCPolynomial result;
  std::map<std::string, Rat> pending = p.terms;
  while (!pending.empty()) {
    auto it = pending.begin();
    std::string w = it->first;
    Rat c = it->second;
    pending.erase(it);
    if (c == 0) continue;
    auto pos = w.find("DE");
    if (pos == std::string::npos) {
      result.add(w, c);
      continue;
    }
    std::string pre = w.substr(0, pos), post = w.substr(pos + 2);
    auto push = [&](const std::string& word, const Rat& coeff) {
      if (coeff == 0) return;
      auto [slot, inserted] = pending.emplace(word, coeff);
      if (!inserted) {
        slot->second += coeff;
        if (slot->second == 0) pending.erase(slot);
      }
    };
    push(pre + "ED" + post, c * rule.q);
    push(pre + "D" + post, c * rule.alpha);
    push(pre + "E" + post, c * rule.beta);
    push(pre + post, c * rule.gamma);
  }
  return result;
}

inline NCPolynomial normal_form(const NCPolynomial& p, const ModelSpec& m) {
  return normal_form(p, rewrite_rule(m));
}

inline std::string normal_word(int m, int n) {
  return std::string(size_t(m), 'E') + std::string(size_t(n), 'D');
}

}  // namespace floq
