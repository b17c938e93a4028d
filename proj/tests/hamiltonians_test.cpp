#include "rdmkit/hamiltonians.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "rdmkit/oracle.hpp"
#include "rdmkit/rng.hpp"

using namespace rdmkit;
using hamiltonians::IntegralSet;

namespace {

// frozen at first build: oracle N=3 ground energy of random_two_body(6, 1, 1)
constexpr double kRandomR6Seed1N3Energy = -12.995630375903495;

fock::StateVector random_state(int r, int n, Rng& rng) {
  fock::StateVector psi;
  psi.r = r;
  psi.n_particles = n;
  psi.amplitudes = rng.unit_vector(static_cast<int>(binomial(r, n)));
  return psi;
}

}  // namespace

TEST(Pairing, SinglePairGroundEnergy) {
  const auto ints = hamiltonians::pairing(1, Eigen::VectorXd::Zero(1), 1.0);
  EXPECT_NEAR(oracle::ground_state(ints, 2).energy, -1.0, 1e-12);
}

TEST(Pairing, TwoLevelSeniorityZeroBlock) {
  const auto ints = hamiltonians::pairing(2, Eigen::VectorXd::Zero(2), 1.0);
  EXPECT_NEAR(oracle::ground_state(ints, 2).energy, -2.0, 1e-12);
}

TEST(Pairing, NoninteractingLimitFillsLowestOrbitals) {
  Eigen::VectorXd eps(2);
  eps << 0.5, 1.7;
  const auto ints = hamiltonians::pairing(2, eps, 0.0);
  // N=3: two orbitals at 0.5 plus one at 1.7
  EXPECT_NEAR(oracle::ground_state(ints, 3).energy, 0.5 + 0.5 + 1.7, 1e-12);
}

TEST(Hubbard, TwoSiteNoninteracting) {
  const auto ints = hamiltonians::hubbard_chain(2, 1.0, 0.0);
  EXPECT_NEAR(oracle::ground_state(ints, 2).energy, -2.0, 1e-12);
}

TEST(Hubbard, TwoSiteSingletFormula) {
  // (U - sqrt(U^2 + 16 t^2)) / 2 for the two-site singlet sector
  for (double u : {1.0, 4.0, 10.0}) {
    const auto ints = hamiltonians::hubbard_chain(2, 1.0, u);
    const double expected = 0.5 * (u - std::sqrt(u * u + 16.0));
    EXPECT_NEAR(oracle::ground_state(ints, 2).energy, expected, 1e-11) << "U=" << u;
  }
}

TEST(Hubbard, PeriodicRingSingleParticleSpectrum) {
  // 3-site ring, U=0: band energies -2t, t, t; two electrons fill the bottom
  const auto ints = hamiltonians::hubbard_chain(3, 1.0, 0.0, true);
  EXPECT_NEAR(oracle::ground_state(ints, 2).energy, -4.0, 1e-11);
}

TEST(Hubbard, AtomicLimitCostsNothingBelowHalfFilling) {
  const auto ints = hamiltonians::hubbard_chain(3, 0.0, 4.0);
  for (int n = 1; n <= 3; ++n)
    EXPECT_NEAR(oracle::ground_state(ints, n).energy, 0.0, 1e-12) << "N=" << n;
}

TEST(RandomTwoBody, Deterministic) {
  const auto a = hamiltonians::random_two_body(6, 42, 1.0);
  const auto b = hamiltonians::random_two_body(6, 42, 1.0);
  EXPECT_EQ((a.one_body - b.one_body).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.two_body - b.two_body).cwiseAbs().maxCoeff(), 0.0);
  const auto c = hamiltonians::random_two_body(6, 43, 1.0);
  EXPECT_GT((a.one_body - c.one_body).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(RandomTwoBody, ZeroScale) {
  const auto ints = hamiltonians::random_two_body(5, 7, 0.0);
  EXPECT_EQ(ints.one_body.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(oracle::ground_state(ints, 2).energy, 0.0, 1e-15);
}

TEST(RandomTwoBody, GoldenGroundEnergy) {
  // regression fixture frozen at first build (r=6, seed=1, scale=1, N=3)
  const auto ints = hamiltonians::random_two_body(6, 1, 1.0);
  EXPECT_NEAR(oracle::ground_state(ints, 3).energy, kRandomR6Seed1N3Energy, 1e-9);
}

TEST(ModelGenerators, ConserveParticleNumber) {
  // H maps each sector into itself: apply the operator form and check support
  for (const auto& ints :
       {hamiltonians::pairing(2, Eigen::VectorXd::Zero(2), 0.7),
        hamiltonians::hubbard_chain(2, 1.0, 3.0, true)}) {
    // build the polynomial straight from the integral definition
    opalg::OperatorPolynomial h;
    for (int j = 0; j < ints.r; ++j)
      for (int k = 0; k < ints.r; ++k)
        if (ints.one_body(j, k) != 0.0)
          h += ints.one_body(j, k) *
               (opalg::OperatorPolynomial::creation(j) * opalg::OperatorPolynomial::annihilation(k));
    const PairBasis pairs(ints.r);
    for (int p = 0; p < pairs.size(); ++p)
      for (int q = 0; q < pairs.size(); ++q)
        if (ints.two_body(p, q) != 0.0) {
          const auto [j, k] = pairs.pair(p);
          const auto [l, m] = pairs.pair(q);
          h += ints.two_body(p, q) *
               (opalg::OperatorPolynomial::creation(j) * opalg::OperatorPolynomial::creation(k) *
                opalg::OperatorPolynomial::annihilation(m) *
                opalg::OperatorPolynomial::annihilation(l));
        }
    Rng rng(5);
    for (int n : {1, 2, 3}) {
      const auto psi = random_state(ints.r, n, rng);
      const auto out = fock::apply_polynomial(psi, h);
      double outside = 0.0;
      for (std::uint32_t bits = 0; bits < (1u << ints.r); ++bits)
        if (std::popcount(bits) != n) outside = std::max(outside, std::abs(out[bits]));
      EXPECT_LT(outside, 1e-14);
    }
  }
}

TEST(ReducedHamiltonian, ZeroOneBodyLeavesIntegralsUntouched) {
  auto ints = hamiltonians::random_two_body(5, 3, 1.0);
  ints.one_body.setZero();
  const auto k = hamiltonians::reduced_hamiltonian(ints, 3);
  EXPECT_EQ((k.k2 - ints.two_body).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ReducedHamiltonian, PureOneBodyAtNEquals2) {
  auto ints = hamiltonians::random_two_body(5, 4, 1.0);
  ints.two_body.setZero();
  const auto k = hamiltonians::reduced_hamiltonian(ints, 2);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = random_state(5, 2, rng);
    const auto d1 = oracle::compute_rdm(psi, 1).matrix;
    const auto d2 = oracle::compute_rdm(psi, 2).matrix;
    const double via_k2 = hamiltonians::energy_from_rdm(k, d2);
    const double via_h = ints.one_body.cwiseProduct(d1).sum().real();
    EXPECT_NEAR(via_k2, via_h, 1e-12);
  }
}

TEST(ReducedHamiltonian, GroundStateEnergyEquality) {
  const auto ints = hamiltonians::hubbard_chain(2, 1.0, 4.0);
  const auto gs = oracle::ground_state(ints, 2);
  const auto d2 = oracle::compute_rdm(gs.state, 2).matrix;
  const auto k = hamiltonians::reduced_hamiltonian(ints, 2);
  EXPECT_NEAR(hamiltonians::energy_from_rdm(k, d2), 2.0 - 2.0 * std::sqrt(2.0), 1e-11);
}

TEST(ReducedHamiltonian, TracePairingMatchesExpectationOnRandomStates) {
  Rng rng(13);
  const std::vector<IntegralSet> models = {
      hamiltonians::pairing(3, Eigen::VectorXd::Zero(3), 1.3),
      hamiltonians::hubbard_chain(3, 1.0, 2.5),
      hamiltonians::random_two_body(6, 8, 1.0),
  };
  for (const auto& ints : models) {
    for (int n : {2, 3, 4}) {
      const auto k = hamiltonians::reduced_hamiltonian(ints, n);
      const auto h = oracle::sector_hamiltonian(ints, n);
      for (int trial = 0; trial < 34; ++trial) {
        const auto psi = random_state(ints.r, n, rng);
        const auto d2 = oracle::compute_rdm(psi, 2).matrix;
        const double via_k2 = hamiltonians::energy_from_rdm(k, d2);
        const double direct = (psi.amplitudes.adjoint() * h * psi.amplitudes)(0).real();
        EXPECT_NEAR(via_k2, direct, 1e-10);
      }
    }
  }
}

TEST(ReducedHamiltonian, RejectsSmallN) {
  const auto ints = hamiltonians::hubbard_chain(2, 1.0, 1.0);
  EXPECT_THROW(hamiltonians::reduced_hamiltonian(ints, 1), std::domain_error);
}

TEST(IntegralIo, RoundTripIsExact) {
  const auto ints = hamiltonians::random_two_body(5, 21, 1.0);
  std::stringstream ss;
  hamiltonians::write_integrals(ss, ints);
  const auto back = hamiltonians::read_integrals(ss);
  EXPECT_EQ(back.r, ints.r);
  EXPECT_EQ((back.one_body - ints.one_body).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((back.two_body - ints.two_body).cwiseAbs().maxCoeff(), 0.0);
}

TEST(IntegralIo, CommentsAnyOrderLastWriteWins) {
  std::stringstream ss(
      "# leading comment\n"
      "RDMKIT 1 r=4\n"
      "v 0 1 2 3 9.0 0.0   # overwritten below\n"
      "h 1 0 0.5 -0.25\n"
      "\n"
      "v 0 1 2 3 4.0 0.0\n");
  const auto ints = hamiltonians::read_integrals(ss);
  EXPECT_EQ(ints.r, 4);
  const PairBasis pairs(4);
  EXPECT_EQ(ints.two_body(pairs.index(0, 1), pairs.index(2, 3)), Complex(4.0, 0.0));
  EXPECT_EQ(ints.two_body(pairs.index(2, 3), pairs.index(0, 1)), Complex(4.0, 0.0));
  EXPECT_EQ(ints.one_body(1, 0), Complex(0.5, -0.25));
  EXPECT_EQ(ints.one_body(0, 1), Complex(0.5, 0.25));
}

TEST(IntegralIo, RejectsMalformedFiles) {
  const auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return hamiltonians::read_integrals(ss);
  };
  EXPECT_THROW(parse(""), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("NOTRDMKIT 1 r=4\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 2 r=4\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 1 r=99\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 1 r=4\nh 0 9 1 0\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 1 r=4\nv 1 0 2 3 1 0\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 1 r=4\nw 0 0 1 0\n"), hamiltonians::IntegralParseError);
  EXPECT_THROW(parse("RDMKIT 1 r=4\nh 0 1 1\n"), hamiltonians::IntegralParseError);
}

TEST(IntegralSet, ValidatesHermiticity) {
  auto ints = IntegralSet::zero(4);
  ints.one_body(0, 1) = Complex(0.0, 1.0);  // missing conjugate partner
  EXPECT_THROW(ints.validate(), std::invalid_argument);
}
