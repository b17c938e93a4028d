#include "rdmkit/conditions.hpp"

#include <nlohmann/json.hpp>

#include "rdmkit/oracle.hpp"

namespace rdmkit::conditions {

namespace {

/// Applies a single monomial to a Fock vector (rightmost factor first).
fock::FockVector apply_monomial(const fock::FockVector& v, const opalg::Monomial& m) {
  fock::FockVector out(v.r());
  const std::uint32_t dim = static_cast<std::uint32_t>(v.dim());
  for (std::uint32_t bits = 0; bits < dim; ++bits) {
    const Complex amp = v[bits];
    if (amp == 0.0) continue;
    fock::OccupationState s{bits};
    int sign = 1;
    bool alive = true;
    for (int i = m.degree() - 1; i >= 0 && alive; --i) {
      const auto f = m.factor(i);
      const auto next =
          f.dagger() ? fock::apply_creation(s, f.index()) : fock::apply_annihilation(s, f.index());
      if (!next) {
        alive = false;
        break;
      }
      sign *= next->sign;
      s = next->state;
    }
    if (alive) out[s.bits] += static_cast<double>(sign) * amp;
  }
  return out;
}

/// Net particle-number shift of the adjoint op (O^+ adds undaggers-daggers).
int adjoint_shift(const opalg::Monomial& m) {
  return m.degree() - 2 * m.dagger_count();
}

opalg::Monomial adjoint_monomial(const opalg::Monomial& m) {
  opalg::Monomial rev;
  for (int i = m.degree() - 1; i >= 0; --i) {
    const auto f = m.factor(i);
    rev.push_back(f.dagger() ? opalg::Factor::annihilation(f.index())
                             : opalg::Factor::creation(f.index()));
  }
  return rev;
}

}  // namespace

MetricMatrix metric_matrix(const fock::StateVector& psi, MetricKind kind) {
  const auto basis = opalg::metric_operator_basis(kind, psi.r);
  MetricMatrix out;
  out.kind = kind;
  out.basis_labels = basis.row_labels;
  out.matrix = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);

  const fock::FockVector psi_fock = psi.to_fock();
  for (const auto& fam : basis.families) {
    // All covered ops of one family shift the particle number identically, so
    // the applied vectors live in a single sector.
    int shift = 0;
    bool any = false;
    for (const auto& op : fam.ops)
      if (op) {
        shift = adjoint_shift(*op);
        any = true;
        break;
      }
    if (!any) continue;
    const int n_target = psi.n_particles + shift;
    if (n_target < 0 || n_target > psi.r) continue;  // family annihilates the sector

    const std::int64_t target_dim = binomial(psi.r, n_target);
    Eigen::MatrixXcd applied = Eigen::MatrixXcd::Zero(target_dim, basis.dim);
    for (int s = 0; s < basis.dim; ++s) {
      const auto& op = fam.ops[static_cast<std::size_t>(s)];
      if (!op) continue;
      const auto u = apply_monomial(psi_fock, adjoint_monomial(*op));
      applied.col(s) = fock::StateVector::from_fock(u, n_target).amplitudes;
    }
    const Eigen::MatrixXcd gram = applied.adjoint() * applied;
    out.matrix += fam.weight * (fam.transposed ? gram.transpose() : gram);
  }
  return out;
}

std::vector<MetricMatrix> metric_matrices(const fock::StateVector& psi) {
  std::vector<MetricMatrix> out;
  for (MetricKind k : opalg::kAllMetricKinds) out.push_back(metric_matrix(psi, k));
  return out;
}

MetricMatrix metric_matrix(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2, int r,
                           MetricKind kind) {
  const auto& spec = opalg::cached_metric_map(kind, r);
  MetricMatrix out;
  out.kind = kind;
  out.basis_labels = spec.row_labels;
  out.matrix = spec.apply(d1, d2);
  return out;
}

std::vector<MetricMatrix> metric_matrices(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2,
                                          int r) {
  std::vector<MetricMatrix> out;
  for (MetricKind k : opalg::kAllMetricKinds) out.push_back(metric_matrix(d1, d2, r, k));
  return out;
}

std::vector<MetricMatrix> metric_matrices_from_d2(const Eigen::MatrixXcd& d2, int r,
                                                  int n_particles) {
  const Eigen::MatrixXcd d1 = oracle::contract_to_one_rdm(d2, r, n_particles);
  return metric_matrices(d1, d2, r);
}

ConditionReport audit(const MetricMatrix& m, double tolerance) {
  ConditionReport rep;
  rep.kind = m.kind;
  rep.dimension = static_cast<int>(m.matrix.rows());
  rep.tolerance = tolerance;
  if (rep.dimension == 0) {
    rep.min_eigenvalue = 0.0;
    rep.violated = false;
    return rep;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.matrix);
  rep.min_eigenvalue = es.eigenvalues()(0);
  rep.witness = es.eigenvectors().col(0);
  rep.violated = rep.min_eigenvalue < -tolerance;
  return rep;
}

void to_json(nlohmann::json& j, const ConditionReport& report) {
  nlohmann::json witness = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.witness.size(); ++i)
    witness.push_back({report.witness(i).real(), report.witness(i).imag()});
  j = nlohmann::json{{"kind", opalg::to_string(report.kind)},
                     {"min_eigenvalue", report.min_eigenvalue},
                     {"dimension", report.dimension},
                     {"tolerance", report.tolerance},
                     {"violated", report.violated},
                     {"witness", std::move(witness)}};
}

void from_json(const nlohmann::json& j, ConditionReport& report) {
  report.kind = opalg::metric_kind_from_string(j.at("kind").get<std::string>());
  report.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  report.dimension = j.at("dimension").get<int>();
  report.tolerance = j.at("tolerance").get<double>();
  report.violated = j.at("violated").get<bool>();
  const auto& w = j.at("witness");
  report.witness.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    report.witness(static_cast<Eigen::Index>(i)) =
        Complex(w[i].at(0).get<double>(), w[i].at(1).get<double>());
}

namespace {

// Table of the eight (2,4)-positivity rows. Each row pairs its heavy pattern
// (weight 3) with the four patterns one x/o flip away and the complement.
constexpr std::array<std::array<const char*, 6>, 8> kTwoFourTable = {{
    {"xxxx", "xxxo", "xxox", "xoxx", "oxxx", "oooo"},
    {"xxxo", "xxxx", "xxoo", "xoxo", "oxxo", "ooox"},
    {"xxox", "xxoo", "xxxx", "xoox", "oxox", "ooxo"},
    {"xoxx", "xoxo", "xoox", "xxxx", "ooxx", "oxoo"},
    {"oxxx", "oxxo", "oxox", "ooxx", "xxxx", "xooo"},
    {"xxoo", "xxox", "xxxo", "xooo", "oxoo", "ooxx"},
    {"xoox", "xooo", "xoxx", "xxox", "ooox", "oxxo"},
    {"xoxo", "xoxx", "xooo", "xxxo", "ooxo", "oxox"},
}};

constexpr std::array<double, 6> kTwoFourWeights = {3, 1, 1, 1, 1, 1};

}  // namespace

TwoFourCondition TwoFourCondition::table_row(int index) {
  if (index < 1 || index > 8) throw std::domain_error("table row index must be in 1..8");
  TwoFourCondition cond;
  cond.index = index;
  cond.dual = false;
  for (int i = 0; i < 6; ++i)
    cond.patterns[static_cast<std::size_t>(i)] = {
        kTwoFourTable[static_cast<std::size_t>(index - 1)][static_cast<std::size_t>(i)],
        kTwoFourWeights[static_cast<std::size_t>(i)]};
  return cond;
}

std::string TwoFourCondition::name() const {
  return "row" + std::to_string(index) + (dual ? "*" : "");
}

TwoFourCondition particle_hole_dual(TwoFourCondition cond) {
  for (auto& [pattern, weight] : cond.patterns)
    for (char& ch : pattern) ch = (ch == 'x') ? 'o' : 'x';
  cond.dual = !cond.dual;
  return cond;
}

int pattern_code(std::string_view pattern) {
  if (pattern.size() != 4) throw std::domain_error("pattern code requires length 4");
  int code = 0;
  for (int i = 0; i < 4; ++i)
    if (pattern[static_cast<std::size_t>(i)] == 'x') code |= 1 << i;
  return code;
}

std::string pattern_from_code(int code) {
  std::string p(4, 'o');
  for (int i = 0; i < 4; ++i)
    if (code & (1 << i)) p[static_cast<std::size_t>(i)] = 'x';
  return p;
}

namespace {

double pattern_square_norm(const fock::FockVector& psi_fock, std::string_view pattern,
                           const CoefficientVectors& coeffs) {
  // C^+ = S_len^+ ... S_1^+ applied right to left: position order.
  fock::FockVector v = psi_fock;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == 'x') {
      v = fock::apply_smeared(v, coeffs.at(static_cast<int>(i)), /*dagger=*/false);
    } else {
      v = fock::apply_smeared(v, coeffs.at(static_cast<int>(i)).conjugate(), /*dagger=*/true);
    }
  }
  return v.amplitudes().squaredNorm();
}

}  // namespace

std::array<double, 16> pattern_square_norms(const fock::StateVector& psi,
                                            const CoefficientVectors& coeffs) {
  const CoefficientVectors cv = coeffs.normalized();
  const fock::FockVector psi_fock = psi.to_fock();
  std::array<double, 16> out{};
  for (int code = 0; code < 16; ++code)
    out[static_cast<std::size_t>(code)] = pattern_square_norm(psi_fock, pattern_from_code(code), cv);
  return out;
}

double evaluate_24(const fock::StateVector& psi, const TwoFourCondition& cond,
                   const CoefficientVectors& coeffs) {
  const CoefficientVectors cv = coeffs.normalized();
  const fock::FockVector psi_fock = psi.to_fock();
  double value = 0.0;
  for (const auto& [pattern, weight] : cond.patterns)
    value += weight * pattern_square_norm(psi_fock, pattern, cv);
  return value;
}

namespace {

opalg::OperatorPolynomial weighted_square_sum(const TwoFourCondition& cond,
                                              const CoefficientVectors& cv) {
  opalg::OperatorPolynomial sum;
  for (const auto& [pattern, weight] : cond.patterns) {
    opalg::OperatorPolynomial sq = opalg::hermitian_square(opalg::build_C(pattern, cv));
    sq *= Complex(weight, 0.0);
    sum += sq;
  }
  return sum;
}

}  // namespace

double evaluate_24(const Eigen::MatrixXcd& d2, int r, int n_particles,
                   const TwoFourCondition& cond, const CoefficientVectors& coeffs) {
  const CoefficientVectors cv = coeffs.normalized();
  const Eigen::MatrixXcd d1 = oracle::contract_to_one_rdm(d2, r, n_particles);
  const opalg::OperatorPolynomial sum = weighted_square_sum(cond, cv);
  const opalg::RdmFunctional f = opalg::reduce_to_rdm_functional(sum, r);
  return f.evaluate(d1, d2).real();
}

CancelCheckResult cancel_check(const TwoFourCondition& cond, int r, int draws, std::uint64_t seed,
                               double tol) {
  if (r < 4) throw std::domain_error("cancel_check needs r >= 4");
  require_orbital_count(r);
  if (draws < 1) throw std::domain_error("cancel_check needs at least one draw");
  Rng rng(seed);
  CancelCheckResult result;
  result.max_residual = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto cv = CoefficientVectors::random(r, rng);
    const auto sum = weighted_square_sum(cond, cv);
    for (const auto& [m, c] : sum.terms())
      if (m.degree() > 4) result.max_residual = std::max(result.max_residual, std::abs(c));
  }
  result.pass = result.max_residual < tol;
  return result;
}

double unfactored_pair_residual(int r, std::uint64_t seed) {
  require_orbital_count(r);
  Rng rng(seed);
  // one shared rank-4 tensor, unit Frobenius norm
  const std::size_t count = static_cast<std::size_t>(r) * r * r * r;
  std::vector<Complex> tensor(count);
  double norm2 = 0.0;
  for (auto& z : tensor) {
    z = rng.gaussian_complex();
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : tensor) z *= inv;

  const auto coeff = [&](std::span<const int> idx) {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * static_cast<std::size_t>(r) + static_cast<std::size_t>(i);
    return tensor[flat];
  };

  opalg::OperatorPolynomial sum;
  for (const char* pattern : {"xxxx", "xooo"}) {
    auto sq = opalg::hermitian_square(opalg::build_C_tensor(pattern, r, coeff));
    sq *= Complex(0.5, 0.0);
    sum += sq;
  }
  double residual = 0.0;
  for (const auto& [m, c] : sum.terms())
    if (m.degree() > 4) residual = std::max(residual, std::abs(c));
  return residual;
}

}  // namespace rdmkit::conditions
