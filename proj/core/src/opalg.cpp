#include "rdmkit/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace rdmkit::opalg {

bool Monomial::is_normal_ordered() const {
  bool seen_undagger = false;
  int last_dagger = -1, last_undagger = -1;
  for (int i = 0; i < degree(); ++i) {
    const Factor f = factor(i);
    if (f.dagger()) {
      if (seen_undagger) return false;
      if (f.index() <= last_dagger) return false;
      last_dagger = f.index();
    } else {
      seen_undagger = true;
      if (f.index() <= last_undagger) return false;
      last_undagger = f.index();
    }
  }
  return true;
}

int Monomial::dagger_count() const {
  int n = 0;
  for (int i = 0; i < degree(); ++i)
    if (factor(i).dagger()) ++n;
  return n;
}

int Monomial::max_index() const {
  int m = -1;
  for (int i = 0; i < degree(); ++i) m = std::max(m, factor(i).index());
  return m;
}

std::string Monomial::to_string() const {
  if (degree() == 0) return "1";
  std::string s;
  for (int i = 0; i < degree(); ++i) {
    const Factor f = factor(i);
    if (i) s += ' ';
    s += f.dagger() ? "a+_" : "a_";
    s += std::to_string(f.index());
  }
  return s;
}

OperatorPolynomial OperatorPolynomial::identity(Complex c) {
  OperatorPolynomial p;
  p.add_term(Monomial{}, c);
  return p;
}

OperatorPolynomial OperatorPolynomial::creation(int j) {
  Monomial m;
  m.push_back(Factor::creation(j));
  return from_monomial(m);
}

OperatorPolynomial OperatorPolynomial::annihilation(int j) {
  Monomial m;
  m.push_back(Factor::annihilation(j));
  return from_monomial(m);
}

OperatorPolynomial OperatorPolynomial::from_monomial(const Monomial& m, Complex c) {
  OperatorPolynomial p;
  p.add_term(m, c);
  return p;
}

void OperatorPolynomial::add_term(const Monomial& m, Complex c) {
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kCoeffPruneTol) terms_.erase(it);
}

int OperatorPolynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

int OperatorPolynomial::max_index() const {
  int m = -1;
  for (const auto& [mono, c] : terms_) m = std::max(m, mono.max_index());
  return m;
}

bool OperatorPolynomial::is_normal_ordered() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.first.is_normal_ordered(); });
}

OperatorPolynomial OperatorPolynomial::adjoint() const {
  OperatorPolynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial rev;
    for (int i = m.degree() - 1; i >= 0; --i) {
      const Factor f = m.factor(i);
      rev.push_back(f.dagger() ? Factor::annihilation(f.index()) : Factor::creation(f.index()));
    }
    out.add_term(rev, std::conj(c));
  }
  return out;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(Complex c) {
  if (std::abs(c) < kCoeffPruneTol) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

namespace {

Monomial concat(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (int i = 0; i < b.degree(); ++i) out.push_back(b.factor(i));
  return out;
}

Monomial swap_adjacent(const Monomial& m, int pos) {
  Monomial out;
  for (int i = 0; i < m.degree(); ++i) {
    if (i == pos)
      out.push_back(m.factor(pos + 1));
    else if (i == pos + 1)
      out.push_back(m.factor(pos));
    else
      out.push_back(m.factor(i));
  }
  return out;
}

Monomial erase_pair(const Monomial& m, int pos) {
  Monomial out;
  for (int i = 0; i < m.degree(); ++i)
    if (i != pos && i != pos + 1) out.push_back(m.factor(i));
  return out;
}

}  // namespace

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.add_term(concat(ma, mb), ca * cb);
  return out;
}

std::string OperatorPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i) " << m.to_string();
  }
  return os.str();
}

void accumulate_normal_ordered(OperatorPolynomial& out, const Monomial& m, Complex c) {
  std::vector<std::pair<Monomial, Complex>> work;
  work.emplace_back(m, c);
  while (!work.empty()) {
    auto [cur, coeff] = work.back();
    work.pop_back();

    int pos = -1;
    enum { kNone, kZero, kContract, kSwap } action = kNone;
    for (int i = 0; i + 1 < cur.degree(); ++i) {
      const Factor a = cur.factor(i), b = cur.factor(i + 1);
      if (a == b) {  // nilpotency
        action = kZero;
        pos = i;
        break;
      }
      if (!a.dagger() && b.dagger()) {  // a_j a+_k = delta_jk - a+_k a_j
        action = (a.index() == b.index()) ? kContract : kSwap;
        pos = i;
        break;
      }
      if (a.dagger() == b.dagger() && a.index() > b.index()) {  // sort within block
        action = kSwap;
        pos = i;
        break;
      }
    }

    switch (action) {
      case kNone:
        out.add_term(cur, coeff);
        break;
      case kZero:
        break;
      case kContract:
        work.emplace_back(erase_pair(cur, pos), coeff);
        work.emplace_back(swap_adjacent(cur, pos), -coeff);
        break;
      case kSwap:
        work.emplace_back(swap_adjacent(cur, pos), -coeff);
        break;
    }
  }
}

OperatorPolynomial normal_order(const OperatorPolynomial& p) {
  OperatorPolynomial out;
  for (const auto& [m, c] : p.terms()) accumulate_normal_ordered(out, m, c);
  return out;
}

OperatorPolynomial hermitian_square(const OperatorPolynomial& c) {
  const OperatorPolynomial adj = c.adjoint();
  OperatorPolynomial out;
  for (const auto& [ma, ca] : c.terms())
    for (const auto& [mb, cb] : adj.terms())
      accumulate_normal_ordered(out, concat(ma, mb), ca * cb);
  return out;
}

CoefficientVectors CoefficientVectors::random(int r, Rng& rng) {
  CoefficientVectors v;
  v.b = rng.unit_vector(r);
  v.c = rng.unit_vector(r);
  v.d = rng.unit_vector(r);
  v.e = rng.unit_vector(r);
  return v;
}

CoefficientVectors CoefficientVectors::normalized() const {
  CoefficientVectors out = *this;
  for (int i = 0; i < 4; ++i) {
    if (out.at(i).size() == 0) continue;
    const double nrm = out.at(i).norm();
    if (nrm == 0.0) throw std::invalid_argument("coefficient vector must be nonzero");
    out.at(i) /= nrm;
  }
  return out;
}

const Eigen::VectorXcd& CoefficientVectors::at(int position) const {
  switch (position) {
    case 0: return b;
    case 1: return c;
    case 2: return d;
    case 3: return e;
    default: throw std::out_of_range("coefficient vector position");
  }
}

Eigen::VectorXcd& CoefficientVectors::at(int position) {
  switch (position) {
    case 0: return b;
    case 1: return c;
    case 2: return d;
    case 3: return e;
    default: throw std::out_of_range("coefficient vector position");
  }
}

namespace {

void validate_pattern(std::string_view pattern) {
  if (pattern.empty() || pattern.size() > 4)
    throw std::domain_error("pattern length must be 1..4");
  for (char ch : pattern)
    if (ch != 'x' && ch != 'o')
      throw std::domain_error("pattern may contain only 'x' and 'o'");
}

}  // namespace

OperatorPolynomial build_C(std::string_view pattern, const CoefficientVectors& coeffs) {
  validate_pattern(pattern);
  const int len = static_cast<int>(pattern.size());
  const int r = static_cast<int>(coeffs.b.size());
  for (int i = 0; i < len; ++i)
    if (coeffs.at(i).size() != r)
      throw std::invalid_argument("coefficient vectors must share length r");

  OperatorPolynomial out;
  std::vector<int> idx(static_cast<std::size_t>(len), 0);
  while (true) {
    Complex prod = 1.0;
    for (int i = 0; i < len; ++i) {
      const Complex v = coeffs.at(i)(idx[static_cast<std::size_t>(i)]);
      prod *= (pattern[static_cast<std::size_t>(i)] == 'x') ? std::conj(v) : v;
      if (prod == 0.0) break;
    }
    if (std::abs(prod) >= kCoeffPruneTol) {
      Monomial m;
      for (int i = 0; i < len; ++i) {
        const int j = idx[static_cast<std::size_t>(i)];
        m.push_back(pattern[static_cast<std::size_t>(i)] == 'x' ? Factor::creation(j)
                                                                : Factor::annihilation(j));
      }
      accumulate_normal_ordered(out, m, prod);
    }
    int pos = len - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == r) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

OperatorPolynomial build_C_tensor(std::string_view pattern, int r,
                                  const std::function<Complex(std::span<const int>)>& coeff) {
  validate_pattern(pattern);
  require_orbital_count(r);
  const int len = static_cast<int>(pattern.size());
  OperatorPolynomial out;
  std::vector<int> idx(static_cast<std::size_t>(len), 0);
  while (true) {
    const Complex c = coeff(std::span<const int>(idx.data(), idx.size()));
    if (std::abs(c) >= kCoeffPruneTol) {
      Monomial m;
      for (int i = 0; i < len; ++i) {
        const int j = idx[static_cast<std::size_t>(i)];
        m.push_back(pattern[static_cast<std::size_t>(i)] == 'x' ? Factor::creation(j)
                                                                : Factor::annihilation(j));
      }
      accumulate_normal_ordered(out, m, c);
    }
    int pos = len - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == r) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

Complex RdmFunctional::evaluate(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2) const {
  if (d1.rows() != one_body.rows() || d2.rows() != two_body.rows())
    throw std::invalid_argument("RDM dimensions do not match the functional");
  return constant + one_body.cwiseProduct(d1).sum() + two_body.cwiseProduct(d2).sum();
}

NotTwoBodyReducible::NotTwoBodyReducible(const Monomial& m, double magnitude)
    : std::runtime_error("term '" + m.to_string() + "' survives 2-RDM reduction (|coeff| = " +
                         std::to_string(magnitude) + ")"),
      term_(m),
      magnitude_(magnitude) {}

RdmFunctional reduce_to_rdm_functional(const OperatorPolynomial& p, int r, double tol) {
  require_orbital_count(r);
  if (p.max_index() >= r) throw std::invalid_argument("polynomial index exceeds orbital count");
  const PairBasis pairs(r);
  RdmFunctional f;
  f.r = r;
  f.one_body = Eigen::MatrixXcd::Zero(r, r);
  f.two_body = Eigen::MatrixXcd::Zero(pairs.size(), pairs.size());

  for (const auto& [m, c] : p.terms()) {
    if (!m.is_normal_ordered())
      throw std::invalid_argument("reduce_to_rdm_functional requires a normal-ordered input");
    const int deg = m.degree();
    if (deg > 4) {
      if (std::abs(c) >= tol) throw NotTwoBodyReducible(m, std::abs(c));
      continue;
    }
    const int daggers = m.dagger_count();
    if (2 * daggers != deg) continue;  // shifts particle number: zero on any sector state
    if (deg == 0) {
      f.constant += c;
    } else if (deg == 2) {
      f.one_body(m.factor(0).index(), m.factor(1).index()) += c;
    } else {  // a+_j a+_k a_l a_m with j<k, l<m; 2D element has annihilators reversed
      const int row = pairs.index(m.factor(0).index(), m.factor(1).index());
      const int col = pairs.index(m.factor(2).index(), m.factor(3).index());
      f.two_body(row, col) -= c;
    }
  }
  return f;
}

}  // namespace rdmkit::opalg
