#include "rdmkit/fock.hpp"

#include <algorithm>
#include <stdexcept>

#include "rdmkit/opalg.hpp"

namespace rdmkit::fock {

std::vector<OccupationState> enumerate_sector(int r, int n_particles) {
  require_orbital_count(r);
  if (n_particles < 0 || n_particles > r)
    throw std::domain_error("particle count must be in [0, r]");
  std::vector<OccupationState> out;
  out.reserve(static_cast<std::size_t>(binomial(r, n_particles)));
  const std::uint32_t limit = std::uint32_t{1} << r;
  for (std::uint32_t bits = 0; bits < limit; ++bits)
    if (std::popcount(bits) == n_particles) out.push_back({bits});
  return out;
}

int sector_index(int r, OccupationState s) {
  // Rank of s.bits among same-popcount words below 2^r, in increasing order.
  const int n = s.particle_count();
  std::int64_t rank = 0;
  int seen = 0;
  for (int j = r - 1; j >= 0; --j) {
    if (s.occupied(j)) {
      // words with bit j clear and the remaining (n - seen) particles below j
      rank += binomial(j, n - seen);
      ++seen;
    }
  }
  return static_cast<int>(rank);
}

namespace {
inline int jordan_wigner_sign(std::uint32_t bits, int j) {
  const std::uint32_t below = bits & ((std::uint32_t{1} << j) - 1);
  return (std::popcount(below) & 1) ? -1 : +1;
}
}  // namespace

std::optional<SignedState> apply_creation(OccupationState s, int j) {
  if (j < 0 || j >= kMaxOrbitals) throw std::domain_error("orbital index out of range");
  const std::uint32_t mask = std::uint32_t{1} << j;
  if (s.bits & mask) return std::nullopt;
  return SignedState{jordan_wigner_sign(s.bits, j), {s.bits | mask}};
}

std::optional<SignedState> apply_annihilation(OccupationState s, int j) {
  if (j < 0 || j >= kMaxOrbitals) throw std::domain_error("orbital index out of range");
  const std::uint32_t mask = std::uint32_t{1} << j;
  if (!(s.bits & mask)) return std::nullopt;
  return SignedState{jordan_wigner_sign(s.bits, j), {s.bits & ~mask}};
}

void StateVector::normalize() {
  const double nrm = amplitudes.norm();
  if (nrm == 0.0) throw std::invalid_argument("cannot normalize the zero state");
  amplitudes /= nrm;
}

FockVector StateVector::to_fock() const {
  FockVector out(r);
  const auto sector = enumerate_sector(r, n_particles);
  if (static_cast<std::int64_t>(sector.size()) != amplitudes.size())
    throw std::invalid_argument("state amplitude length does not match its sector");
  for (std::size_t i = 0; i < sector.size(); ++i)
    out[sector[i].bits] = amplitudes(static_cast<std::int64_t>(i));
  return out;
}

StateVector StateVector::from_fock(const FockVector& v, int n_particles) {
  StateVector out;
  out.r = v.r();
  out.n_particles = n_particles;
  const auto sector = enumerate_sector(v.r(), n_particles);
  out.amplitudes.resize(static_cast<std::int64_t>(sector.size()));
  for (std::size_t i = 0; i < sector.size(); ++i)
    out.amplitudes(static_cast<std::int64_t>(i)) = v[sector[i].bits];
  return out;
}

StateVector StateVector::determinant(int r, OccupationState s) {
  StateVector out;
  out.r = r;
  out.n_particles = s.particle_count();
  out.amplitudes = Eigen::VectorXcd::Zero(binomial(r, out.n_particles));
  out.amplitudes(sector_index(r, s)) = 1.0;
  return out;
}

FockVector apply_polynomial(const FockVector& v, const opalg::OperatorPolynomial& p) {
  FockVector out(v.r());
  if (p.max_index() >= v.r()) throw std::domain_error("polynomial index exceeds orbital count");
  const std::uint32_t dim = static_cast<std::uint32_t>(v.dim());
  for (const auto& [mono, coeff] : p.terms()) {
    for (std::uint32_t bits = 0; bits < dim; ++bits) {
      const Complex amp = v[bits];
      if (amp == 0.0) continue;
      OccupationState s{bits};
      int sign = 1;
      bool alive = true;
      // rightmost factor acts first
      for (int i = mono.degree() - 1; i >= 0; --i) {
        const auto f = mono.factor(i);
        const auto next =
            f.dagger() ? apply_creation(s, f.index()) : apply_annihilation(s, f.index());
        if (!next) {
          alive = false;
          break;
        }
        sign *= next->sign;
        s = next->state;
      }
      if (alive) out[s.bits] += coeff * static_cast<double>(sign) * amp;
    }
  }
  return out;
}

FockVector apply_polynomial(const StateVector& v, const opalg::OperatorPolynomial& p) {
  return apply_polynomial(v.to_fock(), p);
}

FockVector apply_smeared(const FockVector& v, const Eigen::VectorXcd& coeff, bool dagger) {
  const int r = v.r();
  if (coeff.size() != r) throw std::invalid_argument("smear coefficient length must equal r");
  FockVector out(r);
  const std::uint32_t dim = static_cast<std::uint32_t>(v.dim());
  for (std::uint32_t bits = 0; bits < dim; ++bits) {
    const Complex amp = v[bits];
    if (amp == 0.0) continue;
    if (dagger) {
      for (int j = 0; j < r; ++j) {
        const std::uint32_t mask = std::uint32_t{1} << j;
        if (bits & mask) continue;
        const int sign = jordan_wigner_sign(bits, j);
        out[bits | mask] += coeff(j) * static_cast<double>(sign) * amp;
      }
    } else {
      for (int j = 0; j < r; ++j) {
        const std::uint32_t mask = std::uint32_t{1} << j;
        if (!(bits & mask)) continue;
        const int sign = jordan_wigner_sign(bits, j);
        out[bits & ~mask] += coeff(j) * static_cast<double>(sign) * amp;
      }
    }
  }
  return out;
}

}  // namespace rdmkit::fock
