#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rdmkit/common.hpp"

namespace rdmkit::hamiltonians {

/// Coefficients of H = sum_{jk} h_jk a+_j a_k
///                    + sum_{j<k, l<m} V_(jk),(lm) a+_j a+_k a_m a_l.
/// Both matrices are Hermitian (the pair-basis matrix in its pair indices).
struct IntegralSet {
  int r = 0;
  Eigen::MatrixXcd one_body;  // r x r
  Eigen::MatrixXcd two_body;  // C(r,2) x C(r,2), ordered-pair basis

  static IntegralSet zero(int r);
  void validate() const;  // Hermiticity within 1e-12
};

/// Reduced BCS pairing model on P doubly degenerate levels (spin orbitals
/// 2p, 2p+1): H = sum_p eps_p (n_2p + n_2p+1)
///              - g sum_{pq} a+_2p a+_2p+1 a_2q+1 a_2q.
IntegralSet pairing(int levels, const Eigen::VectorXd& eps, double g);

/// Hubbard chain with L sites; spin orbitals 2s (up), 2s+1 (down), hopping -t
/// between like-spin neighbors, on-site repulsion U. The periodic flag adds
/// the wrap-around bond (ignored for L = 2, where it would duplicate a bond).
IntegralSet hubbard_chain(int sites, double t, double u, bool periodic = false);

/// Seed-reproducible Gaussian Hermitian one-body plus pair-basis-Hermitian
/// two-body integrals; identical inputs give bit-identical output.
IntegralSet random_two_body(int r, std::uint64_t seed, double scale);

/// Pair-basis matrix K2 with Tr-pairing sum K2 .* 2D = <H> on every
/// N-particle state: the two-body integrals plus the one-body part folded in
/// with weight 1/(N-1).
struct ReducedHamiltonian {
  int r = 0;
  int n_particles = 0;
  Eigen::MatrixXcd k2;  // C(r,2) x C(r,2)
};

ReducedHamiltonian reduced_hamiltonian(const IntegralSet& ints, int n_particles);

/// The energy functional sum_PQ K2_PQ 2D_PQ (real for Hermitian arguments).
double energy_from_rdm(const ReducedHamiltonian& k, const Eigen::MatrixXcd& d2);

class IntegralParseError : public std::runtime_error {
 public:
  explicit IntegralParseError(const std::string& what) : std::runtime_error(what) {}
};

/// RDMKIT integral file format (UTF-8 text):
///   RDMKIT 1 r=<int>
///   h <j> <k> <re> <im>            one-body element, j <= k; mirror implied
///   v <j> <k> <l> <m> <re> <im>    pair element (j<k),(l<m); mirror implied
/// '#' starts a comment; unspecified entries are zero; duplicate entries are
/// last-write-wins. The writer emits sorted upper-triangle indices.
void write_integrals(std::ostream& os, const IntegralSet& ints);
IntegralSet read_integrals(std::istream& is);

void write_integrals_file(const std::string& path, const IntegralSet& ints);
IntegralSet read_integrals_file(const std::string& path);

}  // namespace rdmkit::hamiltonians
