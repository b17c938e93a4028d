#include "rdmkit/hamiltonians.hpp"

#include "rdmkit/rng.hpp"

namespace rdmkit::hamiltonians {

IntegralSet IntegralSet::zero(int r) {
  require_orbital_count(r);
  IntegralSet out;
  out.r = r;
  out.one_body = Eigen::MatrixXcd::Zero(r, r);
  const auto p = binomial(r, 2);
  out.two_body = Eigen::MatrixXcd::Zero(p, p);
  return out;
}

void IntegralSet::validate() const {
  require_orbital_count(r);
  if (one_body.rows() != r || one_body.cols() != r)
    throw std::invalid_argument("one-body matrix has wrong dimensions");
  const auto p = binomial(r, 2);
  if (two_body.rows() != p || two_body.cols() != p)
    throw std::invalid_argument("two-body matrix has wrong dimensions");
  if ((one_body - one_body.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("one-body matrix is not Hermitian");
  if ((two_body - two_body.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("two-body matrix is not Hermitian");
}

IntegralSet pairing(int levels, const Eigen::VectorXd& eps, double g) {
  if (levels < 1) throw std::domain_error("pairing model needs at least one level");
  if (eps.size() != levels) throw std::invalid_argument("eps must have one entry per level");
  const int r = 2 * levels;
  IntegralSet out = IntegralSet::zero(r);
  const PairBasis pairs(r);
  for (int p = 0; p < levels; ++p) {
    out.one_body(2 * p, 2 * p) = eps(p);
    out.one_body(2 * p + 1, 2 * p + 1) = eps(p);
  }
  // a+_2p a+_2p+1 a_2q+1 a_2q is the pair-basis unit ((2p,2p+1),(2q,2q+1))
  for (int p = 0; p < levels; ++p)
    for (int q = 0; q < levels; ++q)
      out.two_body(pairs.index(2 * p, 2 * p + 1), pairs.index(2 * q, 2 * q + 1)) = -g;
  return out;
}

IntegralSet hubbard_chain(int sites, double t, double u, bool periodic) {
  if (sites < 1) throw std::domain_error("hubbard chain needs at least one site");
  const int r = 2 * sites;
  require_orbital_count(r);
  IntegralSet out = IntegralSet::zero(r);
  const PairBasis pairs(r);
  auto add_bond = [&](int s1, int s2) {
    for (int spin = 0; spin < 2; ++spin) {
      out.one_body(2 * s1 + spin, 2 * s2 + spin) = -t;
      out.one_body(2 * s2 + spin, 2 * s1 + spin) = -t;
    }
  };
  for (int s = 0; s + 1 < sites; ++s) add_bond(s, s + 1);
  if (periodic && sites > 2) add_bond(sites - 1, 0);
  for (int s = 0; s < sites; ++s) {
    const int p = pairs.index(2 * s, 2 * s + 1);
    out.two_body(p, p) = u;  // U n_{s,up} n_{s,down}
  }
  return out;
}

IntegralSet random_two_body(int r, std::uint64_t seed, double scale) {
  IntegralSet out = IntegralSet::zero(r);
  Rng rng(seed);
  for (int j = 0; j < r; ++j) {
    out.one_body(j, j) = scale * rng.gaussian();
    for (int k = j + 1; k < r; ++k) {
      const Complex z = scale * rng.gaussian_complex() / std::sqrt(2.0);
      out.one_body(j, k) = z;
      out.one_body(k, j) = std::conj(z);
    }
  }
  const int p = static_cast<int>(binomial(r, 2));
  for (int a = 0; a < p; ++a) {
    out.two_body(a, a) = scale * rng.gaussian();
    for (int b = a + 1; b < p; ++b) {
      const Complex z = scale * rng.gaussian_complex() / std::sqrt(2.0);
      out.two_body(a, b) = z;
      out.two_body(b, a) = std::conj(z);
    }
  }
  return out;
}

ReducedHamiltonian reduced_hamiltonian(const IntegralSet& ints, int n_particles) {
  ints.validate();
  if (n_particles < 2) throw std::domain_error("reduced Hamiltonian needs N >= 2");
  if (n_particles > ints.r) throw std::domain_error("N exceeds the orbital count");
  const PairBasis pairs(ints.r);
  ReducedHamiltonian out;
  out.r = ints.r;
  out.n_particles = n_particles;
  out.k2 = ints.two_body;
  const double w = 1.0 / static_cast<double>(n_particles - 1);
  // <a+_j a+_k a_m a_l> contracts to delta_km 1D_jl - delta_kl 1D_jm
  //                                - delta_jm 1D_kl + delta_jl 1D_km
  for (int row = 0; row < pairs.size(); ++row) {
    const auto [j, k] = pairs.pair(row);
    for (int col = 0; col < pairs.size(); ++col) {
      const auto [l, m] = pairs.pair(col);
      Complex v = 0.0;
      if (k == m) v += w * ints.one_body(j, l);
      if (k == l) v -= w * ints.one_body(j, m);
      if (j == m) v -= w * ints.one_body(k, l);
      if (j == l) v += w * ints.one_body(k, m);
      out.k2(row, col) += v;
    }
  }
  return out;
}

double energy_from_rdm(const ReducedHamiltonian& k, const Eigen::MatrixXcd& d2) {
  if (d2.rows() != k.k2.rows() || d2.cols() != k.k2.cols())
    throw std::invalid_argument("2-RDM dimension does not match the reduced Hamiltonian");
  return k.k2.cwiseProduct(d2).sum().real();
}

}  // namespace rdmkit::hamiltonians
