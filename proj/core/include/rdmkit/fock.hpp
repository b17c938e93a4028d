#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdmkit/common.hpp"

namespace rdmkit::opalg {
class OperatorPolynomial;
}

namespace rdmkit::fock {

/// One Slater determinant over r spin orbitals: bit j set <=> orbital j
/// occupied, orbital 0 in the least significant bit.
struct OccupationState {
  std::uint32_t bits = 0;

  int particle_count() const { return std::popcount(bits); }
  bool occupied(int j) const { return (bits >> j) & 1u; }

  friend auto operator<=>(const OccupationState&, const OccupationState&) = default;
};

struct SignedState {
  int sign;  // +1 or -1
  OccupationState state;
};

/// All C(r, N) determinants of the N-particle sector, strictly increasing in
/// the bits word.
std::vector<OccupationState> enumerate_sector(int r, int n_particles);

/// Position of a sector determinant in the enumerate_sector ordering.
int sector_index(int r, OccupationState s);

/// a+_j |s>. Empty when orbital j is already occupied; the sign is
/// (-1)^(occupied orbitals below j).
std::optional<SignedState> apply_creation(OccupationState s, int j);

/// a_j |s>. Empty when orbital j is empty; same sign convention.
std::optional<SignedState> apply_annihilation(OccupationState s, int j);

/// Dense vector over the full 2^r-dimensional Fock space. Operator action can
/// leave a particle-number sector, so this is the common carrier for
/// apply_polynomial results.
class FockVector {
 public:
  explicit FockVector(int r) : r_(r), amp_(Eigen::VectorXcd::Zero(std::int64_t{1} << r)) {
    require_orbital_count(r);
  }

  int r() const { return r_; }
  std::int64_t dim() const { return amp_.size(); }

  Complex operator[](std::uint32_t bits) const { return amp_(bits); }
  Complex& operator[](std::uint32_t bits) { return amp_(bits); }

  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }

  double norm() const { return amp_.norm(); }
  void set_zero() { amp_.setZero(); }

 private:
  int r_;
  Eigen::VectorXcd amp_;
};

inline Complex inner(const FockVector& a, const FockVector& b) {
  return a.amplitudes().dot(b.amplitudes());
}

/// Normalized N-particle state expressed on the canonical sector enumeration.
struct StateVector {
  int r = 0;
  int n_particles = 0;
  Eigen::VectorXcd amplitudes;  // length C(r, N), enumerate_sector order

  /// Scales to unit norm; throws on the zero vector.
  void normalize();

  FockVector to_fock() const;
  static StateVector from_fock(const FockVector& v, int n_particles);

  /// Determinant |bits> as a StateVector of its own sector.
  static StateVector determinant(int r, OccupationState s);
};

/// Exact linear action of a polynomial in creation/annihilation operators.
/// The result may span several particle-number sectors.
FockVector apply_polynomial(const FockVector& v, const opalg::OperatorPolynomial& p);
FockVector apply_polynomial(const StateVector& v, const opalg::OperatorPolynomial& p);

/// Applies the one-body smear sum_j coeff(j) a+_j (dagger = true) or
/// sum_j coeff(j) a_j (dagger = false). This is the hot path of the
/// (2,4)-condition sampling sweeps, so it bypasses the symbolic layer.
FockVector apply_smeared(const FockVector& v, const Eigen::VectorXcd& coeff, bool dagger);

}  // namespace rdmkit::fock
