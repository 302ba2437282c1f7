#include "boson_algebra.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

namespace liouville::detail {

namespace {

double falling_choose(int q, int r, int t) {
  // C(q,t)·C(r,t)·t!
  double v = 1.0;
  for (int i = 0; i < t; ++i) v *= static_cast<double>(q - i) * static_cast<double>(r - i) / (i + 1);
  return v;
}

}  // namespace

Polynomial Polynomial::constant(int modes, Complex c) {
  Polynomial p(modes);
  p.add(Monomial(static_cast<std::size_t>(2 * modes), 0), c);
  return p;
}

Polynomial Polynomial::create(int modes, int k) {
  Polynomial p(modes);
  Monomial m(static_cast<std::size_t>(2 * modes), 0);
  m[static_cast<std::size_t>(k)] = 1;
  p.add(m, 1.0);
  return p;
}

Polynomial Polynomial::annihilate(int modes, int k) {
  Polynomial p(modes);
  Monomial m(static_cast<std::size_t>(2 * modes), 0);
  m[static_cast<std::size_t>(modes + k)] = 1;
  p.add(m, 1.0);
  return p;
}

void Polynomial::add(const Monomial& m, Complex c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const int M = a.modes_;
  const auto um = static_cast<std::size_t>(M);
  Polynomial out(M);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      // expand mode by mode: a^q a†^r = Σ_t C(q,t)C(r,t)t! a†^{r−t} a^{q−t}
      std::vector<std::pair<Monomial, Complex>> partial{{Monomial(2 * um, 0), ca * cb}};
      for (std::size_t k = 0; k < um; ++k) {
        const int p = ma[k], q = ma[um + k], r = mb[k], s = mb[um + k];
        std::vector<std::pair<Monomial, Complex>> next;
        for (const auto& [m, c] : partial) {
          for (int t = 0; t <= std::min(q, r); ++t) {
            Monomial n = m;
            n[k] = p + r - t;
            n[um + k] = q + s - t;
            next.emplace_back(std::move(n), c * falling_choose(q, r, t));
          }
        }
        partial = std::move(next);
      }
      for (const auto& [m, c] : partial) out.add(m, c);
    }
  }
  return out;
}

}  // namespace liouville::detail
