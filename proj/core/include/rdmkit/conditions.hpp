#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "rdmkit/fock.hpp"
#include "rdmkit/metric_maps.hpp"
#include "rdmkit/opalg.hpp"

namespace rdmkit::conditions {

using opalg::CoefficientVectors;
using opalg::MetricKind;

struct MetricMatrix {
  MetricKind kind{};
  Eigen::MatrixXcd matrix;
  std::vector<std::vector<int>> basis_labels;
};

struct ConditionReport {
  MetricKind kind{};
  double min_eigenvalue = 0.0;
  int dimension = 0;
  double tolerance = 0.0;
  bool violated = false;
  Eigen::VectorXcd witness;  // eigenvector of the minimal eigenvalue
};

void to_json(nlohmann::json& j, const ConditionReport& report);
void from_json(const nlohmann::json& j, ConditionReport& report);

/// Default violation tolerance for metric eigenvalues.
inline constexpr double kMetricTol = 1e-10;
/// Looser tolerance for the (2,4) functionals (two routes, quartic products).
inline constexpr double kTwoFourTol = 1e-9;

/// Gram route: each matrix entry is <Psi| O_s O_t^+ |Psi> with the
/// family weights and orientation of metric_operator_basis.
MetricMatrix metric_matrix(const fock::StateVector& psi, MetricKind kind);
std::vector<MetricMatrix> metric_matrices(const fock::StateVector& psi);

/// Affine-map route from the RDM pair; agrees with the Gram route to 1e-10.
MetricMatrix metric_matrix(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2, int r,
                           MetricKind kind);
std::vector<MetricMatrix> metric_matrices(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2,
                                          int r);
/// Same with the 1-RDM obtained by contraction (needs the particle count).
std::vector<MetricMatrix> metric_matrices_from_d2(const Eigen::MatrixXcd& d2, int r,
                                                  int n_particles);

ConditionReport audit(const MetricMatrix& m, double tolerance = kMetricTol);

/// One Table row of the (2,4)-positivity class: six weighted patterns, the
/// heavy one carrying weight 3 (weights sum to 8).
struct TwoFourCondition {
  int index = 1;  // 1..8
  bool dual = false;
  std::array<std::pair<std::string, double>, 6> patterns;

  static TwoFourCondition table_row(int index);
  std::string name() const;  // "row<k>" with a trailing '*' for the dual
};

/// Swaps every x and o (particle-hole duality); involution on (index, dual).
TwoFourCondition particle_hole_dual(TwoFourCondition cond);

/// Bit i of the code is set iff pattern position i is 'x'.
int pattern_code(std::string_view pattern);
std::string pattern_from_code(int code);

/// <C_p C_p^+> for all 16 length-4 patterns at once; the audit fast path
/// (each condition value is a weighted sum of six of these).
std::array<double, 16> pattern_square_norms(const fock::StateVector& psi,
                                            const CoefficientVectors& coeffs);

/// State route: sum of weighted Hermitian-square expectations.
double evaluate_24(const fock::StateVector& psi, const TwoFourCondition& cond,
                   const CoefficientVectors& coeffs);

/// RDM route via reduce_to_rdm_functional; a broken cancellation surfaces as
/// opalg::NotTwoBodyReducible.
double evaluate_24(const Eigen::MatrixXcd& d2, int r, int n_particles,
                   const TwoFourCondition& cond, const CoefficientVectors& coeffs);

struct CancelCheckResult {
  bool pass = false;
  double max_residual = 0.0;  // largest surviving degree-6/8 coefficient
};

/// Builds the weighted operator sum for `draws` random coefficient draws and
/// reports the largest surviving 3- or 4-body coefficient.
CancelCheckResult cancel_check(const TwoFourCondition& cond, int r, int draws,
                               std::uint64_t seed = 0, double tol = 1e-10);

/// The two-square combination with an unfactored rank-4 coefficient tensor
/// (d = b): returns its surviving high-degree residual, which does not vanish.
double unfactored_pair_residual(int r, std::uint64_t seed = 0);

struct SearchOptions {
  int max_cycles = 40;        // cyclic sweeps over the four vector positions
  double stall_tol = 1e-12;   // stop when a full cycle improves less than this
};

struct SearchResult {
  double best_value = 0.0;
  CoefficientVectors best_coeffs;
};

/// Minimizes evaluate_24 over unit coefficient vectors by cyclic single-vector
/// updates (each subproblem is a Hermitian quadratic form, solved by its
/// minimal eigenvector), restarted from seeded random starts. restarts = 0
/// evaluates the seeded initial vectors only.
SearchResult search_violation(const Eigen::MatrixXcd& d2, int r, int n_particles,
                              const TwoFourCondition& cond, int restarts, std::uint64_t seed,
                              const SearchOptions& opts = {});

}  // namespace rdmkit::conditions
