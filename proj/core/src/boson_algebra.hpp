#pragma once

#include <map>
#include <vector>

#include "liouville/linalg.hpp"

namespace liouville::detail {

/// Normal-ordered monomial Π_k a_k†^{c_k} a_k^{a_k}; entries [0, M) hold
/// the creation powers and [M, 2M) the annihilation powers.
using Monomial = std::vector<int>;

/// Sum of normal-ordered monomials over M bosonic modes.
class Polynomial {
 public:
  explicit Polynomial(int modes) : modes_(modes) {}

  static Polynomial constant(int modes, Complex c);
  static Polynomial create(int modes, int k);
  static Polynomial annihilate(int modes, int k);

  int modes() const { return modes_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(Complex c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  void add(const Monomial& m, Complex c);

 private:
  int modes_;
  std::map<Monomial, Complex> terms_;
};

}  // namespace liouville::detail
