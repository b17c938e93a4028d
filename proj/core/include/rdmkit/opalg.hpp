#pragma once

#include <Eigen/Dense>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rdmkit/common.hpp"
#include "rdmkit/rng.hpp"

namespace rdmkit::opalg {

/// One creation or annihilation factor, packed into a byte.
struct Factor {
  std::uint8_t code = 0;  // index in the low bits, 0x40 set for daggered

  static Factor creation(int j) { return {static_cast<std::uint8_t>(j | 0x40)}; }
  static Factor annihilation(int j) { return {static_cast<std::uint8_t>(j)}; }

  int index() const { return code & 0x3f; }
  bool dagger() const { return code & 0x40; }

  friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// Ordered product of factors. Degree 8 is the largest product the toolkit
/// forms (two degree-4 operators); the cap leaves headroom.
class Monomial {
 public:
  static constexpr int kMaxDegree = 12;

  Monomial() = default;  // identity operator

  int degree() const { return size_; }
  Factor factor(int i) const { return {codes_[static_cast<std::size_t>(i)]}; }

  void push_back(Factor f) {
    if (size_ == kMaxDegree) throw std::length_error("monomial degree cap exceeded");
    codes_[size_++] = f.code;
  }

  /// Daggered factors first, indices strictly increasing within each block.
  bool is_normal_ordered() const;

  int dagger_count() const;
  int max_index() const;

  std::string to_string() const;

  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.codes_ <=> b.codes_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) = default;

 private:
  std::uint8_t size_ = 0;
  std::array<std::uint8_t, kMaxDegree> codes_{};
};

/// Formal sum of factor strings with complex coefficients. Terms are stored
/// exactly as written; normal_order rewrites to the canonical form.
class OperatorPolynomial {
 public:
  using TermMap = std::map<Monomial, Complex>;

  OperatorPolynomial() = default;

  static OperatorPolynomial identity(Complex c = 1.0);
  static OperatorPolynomial creation(int j);
  static OperatorPolynomial annihilation(int j);
  static OperatorPolynomial from_monomial(const Monomial& m, Complex c = 1.0);

  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Accumulates c * m, erasing the term if the sum falls under the pruning
  /// tolerance.
  void add_term(const Monomial& m, Complex c);

  /// Largest term degree (0 for the zero polynomial).
  int degree() const;
  int max_index() const;
  bool is_normal_ordered() const;

  OperatorPolynomial adjoint() const;

  OperatorPolynomial& operator+=(const OperatorPolynomial& o);
  OperatorPolynomial& operator-=(const OperatorPolynomial& o);
  OperatorPolynomial& operator*=(Complex c);
  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) {
    a += b;
    return a;
  }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) {
    a -= b;
    return a;
  }
  friend OperatorPolynomial operator*(OperatorPolynomial a, Complex c) {
    a *= c;
    return a;
  }
  friend OperatorPolynomial operator*(Complex c, OperatorPolynomial a) {
    a *= c;
    return a;
  }
  /// Formal product: concatenates factor strings termwise (no reordering).
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);

  std::string to_string() const;

 private:
  TermMap terms_;
};

/// Rewrites to canonical normal-ordered form using {a_j, a+_k} = delta_jk.
/// The result acts identically on every Fock vector.
OperatorPolynomial normal_order(const OperatorPolynomial& p);

/// Canonicalizes c * m into out (worklist expansion of anticommutators).
void accumulate_normal_ordered(OperatorPolynomial& out, const Monomial& m, Complex c);

/// normal_order(c * adjoint(c)): formally positive semidefinite.
OperatorPolynomial hermitian_square(const OperatorPolynomial& c);

/// The four expansion-coefficient vectors of the pattern-built operators.
/// Pattern position i uses b, c, d, e in that order.
struct CoefficientVectors {
  Eigen::VectorXcd b, c, d, e;

  static CoefficientVectors random(int r, Rng& rng);
  /// Each vector scaled to unit norm (condition evaluation contract).
  CoefficientVectors normalized() const;

  const Eigen::VectorXcd& at(int position) const;
  Eigen::VectorXcd& at(int position);
};

/// Pattern-built operator over {x, o}: x contributes a conjugated coefficient
/// with a creation operator, o a plain coefficient with an annihilation
/// operator. Returned in normal-ordered form.
OperatorPolynomial build_C(std::string_view pattern, const CoefficientVectors& coeffs);

/// Same operator shape with a free coefficient tensor over the index tuple;
/// used to contrast factored against unfactored coefficients.
OperatorPolynomial build_C_tensor(std::string_view pattern, int r,
                                  const std::function<Complex(std::span<const int>)>& coeff);

/// Affine functional constant + sum one_body .* 1D + sum two_body .* 2D whose
/// value equals <Psi|P|Psi> on every fixed-particle-number state.
struct RdmFunctional {
  int r = 0;
  Complex constant{};
  Eigen::MatrixXcd one_body;  // coefficient on 1D_jk = <a+_j a_k>
  Eigen::MatrixXcd two_body;  // coefficient on 2D_(jk),(lm), ordered-pair basis

  Complex evaluate(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2) const;
};

/// A term needing the 3- or 4-RDM survived reduction; carries the offender.
class NotTwoBodyReducible : public std::runtime_error {
 public:
  NotTwoBodyReducible(const Monomial& m, double magnitude);
  const Monomial& offending_term() const { return term_; }
  double magnitude() const { return magnitude_; }

 private:
  Monomial term_;
  double magnitude_;
};

/// Reduces a normal-ordered polynomial to its (1,2)-RDM functional. Terms that
/// change particle number have zero expectation on any fixed-N state and are
/// dropped; a degree > 4 term above tol throws NotTwoBodyReducible.
RdmFunctional reduce_to_rdm_functional(const OperatorPolynomial& p, int r, double tol = 1e-10);

}  // namespace rdmkit::opalg
