#include "rdmkit/conditions.hpp"
#include "rdmkit/oracle.hpp"

namespace rdmkit::conditions {

namespace {

using opalg::OperatorPolynomial;

/// Functional value with 3-/4-body terms dropped. Individual pattern blocks
/// carry high-degree content that only cancels in the weighted row sum, so the
/// per-block functionals are evaluated with that content set to zero; the
/// summed Hessian is exact because the cancellation is an identity in the
/// coefficient vectors.
Complex reduced_value_dropping(const OperatorPolynomial& p, int r, const Eigen::MatrixXcd& d1,
                               const Eigen::MatrixXcd& d2) {
  OperatorPolynomial low;
  for (const auto& [m, c] : p.terms())
    if (m.degree() <= 4) low.add_term(m, c);
  return opalg::reduce_to_rdm_functional(low, r).evaluate(d1, d2);
}

/// Hermitian matrix H with value(v) = v^+ H v for the vector at `position`,
/// the other three vectors held fixed.
Eigen::MatrixXcd position_quadratic_form(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2,
                                         int r, const TwoFourCondition& cond,
                                         const CoefficientVectors& cv, int position) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(r, r);
  for (const auto& [pattern, weight] : cond.patterns) {
    // C(v) is linear in this position's vector: basis polynomials P_i
    std::vector<OperatorPolynomial> basis_polys;
    basis_polys.reserve(static_cast<std::size_t>(r));
    CoefficientVectors probe = cv;
    for (int i = 0; i < r; ++i) {
      probe.at(position) = Eigen::VectorXcd::Unit(r, i);
      basis_polys.push_back(opalg::build_C(pattern, probe));
    }
    std::vector<OperatorPolynomial> adjoints;
    adjoints.reserve(static_cast<std::size_t>(r));
    for (const auto& p : basis_polys) adjoints.push_back(p.adjoint());

    Eigen::MatrixXcd gram(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = i; j < r; ++j) {
        OperatorPolynomial prod;
        for (const auto& [ma, ca] : basis_polys[static_cast<std::size_t>(i)].terms())
          for (const auto& [mb, cb] : adjoints[static_cast<std::size_t>(j)].terms()) {
            opalg::Monomial cat = ma;
            for (int f = 0; f < mb.degree(); ++f) cat.push_back(mb.factor(f));
            opalg::accumulate_normal_ordered(prod, cat, ca * cb);
          }
        const Complex v = reduced_value_dropping(prod, r, d1, d2);
        gram(i, j) = v;
        gram(j, i) = std::conj(v);
      }
    }
    // x-positions enter conjugated (v^+ G v); o-positions plainly (v^+ G^T v)
    if (pattern[static_cast<std::size_t>(position)] == 'x')
      h += weight * gram;
    else
      h += weight * gram.transpose();
  }
  return h;
}

}  // namespace

SearchResult search_violation(const Eigen::MatrixXcd& d2, int r, int n_particles,
                              const TwoFourCondition& cond, int restarts, std::uint64_t seed,
                              const SearchOptions& opts) {
  require_orbital_count(r);
  const Eigen::MatrixXcd d1 = oracle::contract_to_one_rdm(d2, r, n_particles);
  Rng rng(seed);

  SearchResult best;
  best.best_coeffs = CoefficientVectors::random(r, rng);
  best.best_value = evaluate_24(d2, r, n_particles, cond, best.best_coeffs);
  if (restarts == 0) return best;

  for (int start = 0; start < restarts; ++start) {
    CoefficientVectors cv =
        (start == 0) ? best.best_coeffs : CoefficientVectors::random(r, rng);
    double value = evaluate_24(d2, r, n_particles, cond, cv);
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
      const double before = value;
      for (int pos = 0; pos < 4; ++pos) {
        const Eigen::MatrixXcd h = position_quadratic_form(d1, d2, r, cond, cv, pos);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        cv.at(pos) = es.eigenvectors().col(0);
        value = es.eigenvalues()(0);
      }
      if (before - value < opts.stall_tol) break;
    }
    if (value < best.best_value) {
      best.best_value = value;
      best.best_coeffs = cv;
    }
  }
  return best;
}

}  // namespace rdmkit::conditions
