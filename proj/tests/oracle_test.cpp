#include "rdmkit/oracle.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rdmkit/rng.hpp"

using namespace rdmkit;

namespace {

fock::StateVector random_state(int r, int n, Rng& rng) {
  fock::StateVector psi;
  psi.r = r;
  psi.n_particles = n;
  psi.amplitudes = rng.unit_vector(static_cast<int>(binomial(r, n)));
  return psi;
}

}  // namespace

TEST(GroundState, HubbardTwoSite) {
  const auto ints = hamiltonians::hubbard_chain(2, 1.0, 4.0);
  const auto gs = oracle::ground_state(ints, 2);
  EXPECT_NEAR(gs.energy, 2.0 - 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(gs.degenerate);
  EXPECT_NEAR(gs.state.amplitudes.norm(), 1.0, 1e-12);
}

TEST(GroundState, ZeroHamiltonianIsDegenerate) {
  const auto ints = hamiltonians::IntegralSet::zero(4);
  const auto gs = oracle::ground_state(ints, 2);
  EXPECT_NEAR(gs.energy, 0.0, 1e-15);
  EXPECT_TRUE(gs.degenerate);
}

TEST(GroundState, DeterministicPhase) {
  const auto ints = hamiltonians::random_two_body(5, 2, 1.0);
  const auto a = oracle::ground_state(ints, 2);
  const auto b = oracle::ground_state(ints, 2);
  EXPECT_EQ((a.state.amplitudes - b.state.amplitudes).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ComputeRdm, DeterminantOneBody) {
  const auto det = fock::StateVector::determinant(4, {0b0011});
  const auto d1 = oracle::compute_rdm(det, 1);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  EXPECT_LT((d1.matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ComputeRdm, DeterminantTwoBody) {
  const auto det = fock::StateVector::determinant(4, {0b0011});
  const auto d2 = oracle::compute_rdm(det, 2);
  const PairBasis pairs(4);
  EXPECT_NEAR(d2.matrix.trace().real(), 1.0, 1e-14);  // C(2,2)
  EXPECT_NEAR(d2.matrix(pairs.index(0, 1), pairs.index(0, 1)).real(), 1.0, 1e-14);
  EXPECT_NEAR(d2.matrix.cwiseAbs().sum(), 1.0, 1e-14);  // single nonzero element
}

TEST(ComputeRdm, TraceIsNChooseP) {
  Rng rng(3);
  for (const auto& [r, n] : std::vector<std::pair<int, int>>{{5, 3}, {6, 3}, {6, 4}}) {
    const auto psi = random_state(r, n, rng);
    for (int p = 1; p <= std::min(n, 4); ++p) {
      const auto rdm = oracle::compute_rdm(psi, p);
      EXPECT_NEAR(rdm.matrix.trace().real(), static_cast<double>(binomial(n, p)), 1e-10)
          << "r=" << r << " N=" << n << " p=" << p;
    }
  }
}

TEST(ComputeRdm, HermitianAndPositive) {
  Rng rng(5);
  const auto psi = random_state(6, 4, rng);
  for (int p = 1; p <= 4; ++p) {
    const auto rdm = oracle::compute_rdm(psi, p);
    EXPECT_LT((rdm.matrix - rdm.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rdm.matrix);
    EXPECT_GT(es.eigenvalues()(0), -1e-10);
  }
}

TEST(ComputeRdm, RejectsBadOrder) {
  const auto det = fock::StateVector::determinant(4, {0b0011});
  EXPECT_THROW(oracle::compute_rdm(det, 3), std::domain_error);  // p > N
  EXPECT_THROW(oracle::compute_rdm(det, 0), std::domain_error);
}

TEST(ContractToOneRdm, MatchesDirectComputation) {
  Rng rng(7);
  for (const auto& [r, n] : std::vector<std::pair<int, int>>{{4, 2}, {5, 3}, {6, 3}, {6, 5}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto psi = random_state(r, n, rng);
      const auto d1 = oracle::compute_rdm(psi, 1).matrix;
      const auto d2 = oracle::compute_rdm(psi, 2).matrix;
      const auto contracted = oracle::contract_to_one_rdm(d2, r, n);
      EXPECT_LT((contracted - d1).cwiseAbs().maxCoeff(), 1e-10) << "r=" << r << " N=" << n;
    }
  }
}

TEST(Expectation, IdentityAndNumber) {
  Rng rng(9);
  const auto psi = random_state(5, 3, rng);
  EXPECT_NEAR(std::abs(oracle::expectation(psi, opalg::OperatorPolynomial::identity()) - 1.0), 0.0,
              1e-12);
  opalg::OperatorPolynomial total_number;
  for (int j = 0; j < 5; ++j)
    total_number +=
        opalg::OperatorPolynomial::creation(j) * opalg::OperatorPolynomial::annihilation(j);
  const Complex n = oracle::expectation(psi, total_number);
  EXPECT_NEAR(n.real(), 3.0, 1e-12);
  EXPECT_NEAR(n.imag(), 0.0, 1e-12);
}

TEST(Expectation, HermitianSquaresAreNonnegative) {
  Rng rng(11);
  const auto psi = random_state(4, 2, rng);
  for (int trial = 0; trial < 50; ++trial) {
    opalg::OperatorPolynomial c;
    for (int t = 0; t < 3; ++t) {
      opalg::Monomial m;
      const int deg = 1 + static_cast<int>(rng.next_u64() % 3);
      for (int i = 0; i < deg; ++i) {
        const int j = static_cast<int>(rng.next_u64() % 4);
        m.push_back((rng.next_u64() & 1) ? opalg::Factor::creation(j)
                                         : opalg::Factor::annihilation(j));
      }
      c.add_term(m, rng.gaussian_complex());
    }
    const Complex v = oracle::expectation(psi, opalg::hermitian_square(c));
    EXPECT_GT(v.real(), -1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  }
}

TEST(EnergyConsistency, GroundEnergyEqualsReducedTrace) {
  for (const auto& ints :
       {hamiltonians::hubbard_chain(3, 1.0, 4.0), hamiltonians::random_two_body(6, 4, 1.0)}) {
    const auto gs = oracle::ground_state(ints, 3);
    const auto d2 = oracle::compute_rdm(gs.state, 2).matrix;
    const auto k = hamiltonians::reduced_hamiltonian(ints, 3);
    EXPECT_NEAR(hamiltonians::energy_from_rdm(k, d2), gs.energy, 1e-10);
  }
}

TEST(RdmJson, RoundTrip) {
  Rng rng(13);
  const auto psi = random_state(5, 3, rng);
  const auto rdm = oracle::compute_rdm(psi, 2);
  nlohmann::json j;
  to_json(j, rdm);
  oracle::RDMTensor back;
  from_json(j, back);
  EXPECT_EQ(back.p, 2);
  EXPECT_EQ(back.r, 5);
  EXPECT_EQ(back.n_particles, 3);
  EXPECT_LT((back.matrix - rdm.matrix).cwiseAbs().maxCoeff(), 1e-14);
}
