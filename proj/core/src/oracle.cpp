#include "rdmkit/oracle.hpp"

#include <nlohmann/json.hpp>

namespace rdmkit::oracle {

namespace {

using fock::OccupationState;

struct HopResult {
  int sign = 1;
  std::uint32_t bits = 0;
  bool alive = true;
};

inline void annihilate(HopResult& h, int j) {
  const std::uint32_t mask = std::uint32_t{1} << j;
  if (!(h.bits & mask)) {
    h.alive = false;
    return;
  }
  if (std::popcount(h.bits & (mask - 1)) & 1) h.sign = -h.sign;
  h.bits &= ~mask;
}

inline void create(HopResult& h, int j) {
  const std::uint32_t mask = std::uint32_t{1} << j;
  if (h.bits & mask) {
    h.alive = false;
    return;
  }
  if (std::popcount(h.bits & (mask - 1)) & 1) h.sign = -h.sign;
  h.bits |= mask;
}

}  // namespace

Eigen::MatrixXcd sector_hamiltonian(const hamiltonians::IntegralSet& ints, int n_particles) {
  ints.validate();
  if (n_particles < 0 || n_particles > ints.r)
    throw std::domain_error("particle count must be in [0, r]");
  const std::int64_t dim = binomial(ints.r, n_particles);
  if (dim > kMaxSectorDim) throw SectorTooLarge(dim);

  const auto basis = fock::enumerate_sector(ints.r, n_particles);
  const PairBasis pairs(ints.r);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  for (std::int64_t col = 0; col < dim; ++col) {
    const std::uint32_t t = basis[static_cast<std::size_t>(col)].bits;
    // one-body: h_jk a+_j a_k
    for (int k = 0; k < ints.r; ++k) {
      if (!((t >> k) & 1u)) continue;
      HopResult base;
      base.bits = t;
      annihilate(base, k);
      for (int j = 0; j < ints.r; ++j) {
        if (ints.one_body(j, k) == 0.0) continue;
        HopResult hop = base;
        create(hop, j);
        if (!hop.alive) continue;
        const int row = fock::sector_index(ints.r, {hop.bits});
        h(row, col) += ints.one_body(j, k) * static_cast<double>(hop.sign);
      }
    }
    // two-body: V_(jk),(lm) a+_j a+_k a_m a_l
    for (int q = 0; q < pairs.size(); ++q) {
      const auto [l, m] = pairs.pair(q);
      HopResult base;
      base.bits = t;
      annihilate(base, l);
      if (!base.alive) continue;
      annihilate(base, m);
      if (!base.alive) continue;
      for (int p = 0; p < pairs.size(); ++p) {
        if (ints.two_body(p, q) == 0.0) continue;
        const auto [j, k] = pairs.pair(p);
        HopResult hop = base;
        create(hop, k);
        if (!hop.alive) continue;
        create(hop, j);
        if (!hop.alive) continue;
        const int row = fock::sector_index(ints.r, {hop.bits});
        h(row, col) += ints.two_body(p, q) * static_cast<double>(hop.sign);
      }
    }
  }
  return h;
}

GroundState ground_state(const hamiltonians::IntegralSet& ints, int n_particles) {
  const Eigen::MatrixXcd h = sector_hamiltonian(ints, n_particles);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("sector diagonalization failed");

  GroundState out;
  out.energy = es.eigenvalues()(0);
  out.degenerate = h.rows() > 1 && (es.eigenvalues()(1) - es.eigenvalues()(0)) < 1e-9;
  out.state.r = ints.r;
  out.state.n_particles = n_particles;
  out.state.amplitudes = es.eigenvectors().col(0);
  // fix the arbitrary global phase for run-to-run reproducibility
  Eigen::Index imax = 0;
  out.state.amplitudes.cwiseAbs().maxCoeff(&imax);
  const Complex z = out.state.amplitudes(imax);
  if (std::abs(z) > 0) out.state.amplitudes *= std::conj(z) / std::abs(z);
  out.state.normalize();
  return out;
}

RDMTensor compute_rdm(const fock::StateVector& psi, int p) {
  if (p < 1 || p > 4) throw std::domain_error("RDM order must be in [1, 4]");
  if (p > psi.n_particles) throw std::domain_error("RDM order exceeds the particle count");
  const int r = psi.r;
  const int n = psi.n_particles;
  const auto src = fock::enumerate_sector(r, n);
  const TupleBasis tuples(r, p);
  const std::int64_t lower_dim = binomial(r, n - p);

  // w_T = a_{t_p} ... a_{t_1} |Psi>, one vector per increasing tuple
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(lower_dim, tuples.size());
  for (int ti = 0; ti < tuples.size(); ++ti) {
    const auto& t = tuples.tuple(ti);
    for (std::size_t si = 0; si < src.size(); ++si) {
      const Complex amp = psi.amplitudes(static_cast<std::int64_t>(si));
      if (amp == 0.0) continue;
      HopResult hop;
      hop.bits = src[si].bits;
      for (int i = 0; i < p && hop.alive; ++i) annihilate(hop, t[static_cast<std::size_t>(i)]);
      if (!hop.alive) continue;
      w(fock::sector_index(r, {hop.bits}), ti) += static_cast<double>(hop.sign) * amp;
    }
  }

  RDMTensor out;
  out.p = p;
  out.r = r;
  out.n_particles = n;
  out.matrix = w.adjoint() * w;  // Gram matrix: Hermitian and PSD by construction
  return out;
}

Complex expectation(const fock::StateVector& psi, const opalg::OperatorPolynomial& p) {
  const fock::FockVector v = psi.to_fock();
  return fock::inner(v, fock::apply_polynomial(v, p));
}

Eigen::MatrixXcd contract_to_one_rdm(const Eigen::MatrixXcd& d2, int r, int n_particles) {
  if (n_particles < 2) throw std::domain_error("contraction needs N >= 2");
  const PairBasis pairs(r);
  if (d2.rows() != pairs.size() || d2.cols() != pairs.size())
    throw std::invalid_argument("2-RDM dimension does not match r");
  Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(r, r);
  const double w = 1.0 / static_cast<double>(n_particles - 1);
  for (int j = 0; j < r; ++j)
    for (int l = 0; l < r; ++l) {
      Complex sum = 0.0;
      for (int m = 0; m < r; ++m) {
        if (m == j || m == l) continue;
        const auto [pj, sj] = pairs.signed_index(j, m);
        const auto [pl, sl] = pairs.signed_index(l, m);
        sum += static_cast<double>(sj * sl) * d2(pj, pl);
      }
      d1(j, l) = w * sum;
    }
  return d1;
}

void to_json(nlohmann::json& j, const RDMTensor& rdm) {
  const TupleBasis tuples(rdm.r, rdm.p);
  nlohmann::json entries = nlohmann::json::array();
  for (int a = 0; a < tuples.size(); ++a)
    for (int b = a; b < tuples.size(); ++b) {
      const Complex v = rdm.matrix(a, b);
      if (std::abs(v) < 1e-15) continue;
      entries.push_back({{"row", tuples.tuple(a)},
                         {"col", tuples.tuple(b)},
                         {"re", v.real()},
                         {"im", v.imag()}});
    }
  j = nlohmann::json{{"p", rdm.p},
                     {"r", rdm.r},
                     {"N", rdm.n_particles},
                     {"entries", std::move(entries)}};
}

void from_json(const nlohmann::json& j, RDMTensor& rdm) {
  rdm.p = j.at("p").get<int>();
  rdm.r = j.at("r").get<int>();
  rdm.n_particles = j.at("N").get<int>();
  const TupleBasis tuples(rdm.r, rdm.p);
  rdm.matrix = Eigen::MatrixXcd::Zero(tuples.size(), tuples.size());
  for (const auto& e : j.at("entries")) {
    const auto row = e.at("row").get<std::vector<int>>();
    const auto col = e.at("col").get<std::vector<int>>();
    const int a = tuples.index(row), b = tuples.index(col);
    if (a < 0 || b < 0) throw std::invalid_argument("RDM JSON contains an invalid index tuple");
    const Complex v(e.at("re").get<double>(), e.at("im").get<double>());
    rdm.matrix(a, b) = v;
    if (a != b) rdm.matrix(b, a) = std::conj(v);
  }
}

}  // namespace rdmkit::oracle
