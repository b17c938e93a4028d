#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "rdmkit/hamiltonians.hpp"
#include "rdmkit/metric_maps.hpp"

namespace rdmkit::solver {

/// Which PSD conditions constrain the minimization. The primal variable's own
/// positivity (D2) and the one-hole condition Q1 = I - 1D are always enforced;
/// D1 follows from D2 by contraction.
struct ConditionSet {
  bool q2 = false;
  bool g2 = false;
  bool t1 = false;
  bool t2gen = false;

  /// Accepts comma lists of kind names ("D2,Q2,G2", "T2" = "T2gen") and the
  /// compact spellings D, DQ, DQG, DQGT1, DQGT1T2.
  static ConditionSet parse(const std::string& text);
  std::string name() const;  // compact spelling

  std::vector<opalg::MetricKind> flagged_kinds() const;  // beyond D2/Q1
};

struct SolverOptions {
  double linear_tol = 1e-8;  // primal residual target (trace + cone couplings)
  double psd_tol = 1e-8;     // dual residual target
  double stall_tol = 1e-9;   // objective stall, tested once nearly feasible
  int max_iterations = 5000;
  double rho = 10.0;         // initial penalty
  double over_relaxation = 1.8;
  bool verbose = false;
};

struct SolverResult {
  double energy = 0.0;
  double primal_feasibility = 0.0;    // |Tr 2D - C(N,2)| at the solution
  double condition_feasibility = 0.0; // most negative metric eigenvalue
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXcd d2;                // pair-basis 2-RDM at the solution
};

void to_json(nlohmann::json& j, const SolverResult& result);

/// Minimizes Tr(K2 2D) over Hermitian pair-basis 2-RDMs subject to the trace,
/// the contracted Q1 condition, and every flagged metric-map image being PSD.
/// Augmented-Lagrangian outer loop with eigenvalue-clipping projections onto
/// each cone and an exact normal-equation solve for the affine part.
SolverResult lower_bound(const hamiltonians::IntegralSet& ints, int n_particles,
                         const ConditionSet& conds, const SolverOptions& opts = {});

/// Nearest (Frobenius) PSD matrix by clipping negative eigenvalues at zero.
/// Throws std::domain_error if the input deviates from Hermitian by > 1e-10.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& m);

}  // namespace rdmkit::solver
