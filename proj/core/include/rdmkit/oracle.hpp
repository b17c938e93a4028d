#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "rdmkit/common.hpp"
#include "rdmkit/fock.hpp"
#include "rdmkit/hamiltonians.hpp"
#include "rdmkit/opalg.hpp"

namespace rdmkit::oracle {

/// Sector dimensions beyond this are refused (resource error).
inline constexpr std::int64_t kMaxSectorDim = 20000;

class SectorTooLarge : public std::runtime_error {
 public:
  explicit SectorTooLarge(std::int64_t dim)
      : std::runtime_error("sector dimension " + std::to_string(dim) + " exceeds the cap " +
                           std::to_string(kMaxSectorDim)) {}
};

/// p-RDM on the strictly increasing p-tuple basis (lexicographic).
struct RDMTensor {
  int p = 0;
  int r = 0;
  int n_particles = 0;
  Eigen::MatrixXcd matrix;  // C(r,p) x C(r,p), Hermitian PSD, trace C(N,p)
};

struct GroundState {
  double energy = 0.0;
  fock::StateVector state;
  bool degenerate = false;  // spectral gap below 1e-9
};

/// Dense N-particle sector Hamiltonian in enumerate_sector order.
Eigen::MatrixXcd sector_hamiltonian(const hamiltonians::IntegralSet& ints, int n_particles);

/// Exact ground state by dense diagonalization of the N-particle sector.
GroundState ground_state(const hamiltonians::IntegralSet& ints, int n_particles);

/// Element ((j1<...<jp),(k1<...<kp)) = <Psi| a+_j1 .. a+_jp a_kp .. a_k1 |Psi>.
RDMTensor compute_rdm(const fock::StateVector& psi, int p);

/// <Psi| P |Psi> via apply_polynomial.
Complex expectation(const fock::StateVector& psi, const opalg::OperatorPolynomial& p);

/// 1-RDM from a 2-RDM by the signed contraction 1D_jl = sum_m D2e(jm; lm)/(N-1).
Eigen::MatrixXcd contract_to_one_rdm(const Eigen::MatrixXcd& d2, int r, int n_particles);

void to_json(nlohmann::json& j, const RDMTensor& rdm);
void from_json(const nlohmann::json& j, RDMTensor& rdm);

}  // namespace rdmkit::oracle
