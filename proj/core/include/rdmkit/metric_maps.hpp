#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rdmkit/common.hpp"
#include "rdmkit/opalg.hpp"

namespace rdmkit::opalg {

enum class MetricKind { D1, Q1, D2, Q2, G2, T1, T2gen };

inline constexpr MetricKind kAllMetricKinds[] = {MetricKind::D1, MetricKind::Q1, MetricKind::D2,
                                                 MetricKind::Q2, MetricKind::G2, MetricKind::T1,
                                                 MetricKind::T2gen};

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// One Hermitian-square family of a metric matrix: a weighted operator basis
/// over the row slots. Families whose expansion coefficients enter
/// un-conjugated contribute their Gram matrix transposed; the orientation
/// mismatch between the two families of T1/T2gen is what cancels the 3-body
/// content.
struct MetricFamily {
  double weight = 1.0;
  bool transposed = false;
  std::vector<std::optional<Monomial>> ops;  // one per slot; nullopt = not covered
};

struct MetricBasis {
  MetricKind kind{};
  int r = 0;
  int dim = 0;
  std::vector<std::vector<int>> row_labels;  // operator index tuples per slot
  std::vector<MetricFamily> families;
};

/// Operator basis backing each condition:
///   D1: a+_j            Q1: a_j
///   D2: a+_j a+_k       Q2: a_j a_k          (j < k)
///   G2: a+_j a_k        (all ordered pairs)
///   T1: 1/2 (a+_j a+_k a+_l family + transposed a_j a_k a_l family), j<k<l
///   T2gen: 1/2 of the a+_j a+_k a_l family bordered by a+_p singletons plus
///          the transposed a_j a_k a+_l family bordered by a_p singletons;
///          the two singleton borders carry independent coefficients, so the
///          dimension is C(r,2)*r + 2r.
MetricBasis metric_operator_basis(MetricKind kind, int r);

int metric_dimension(MetricKind kind, int r);

/// Sparse affine functional for one matrix entry.
struct SparseAffine {
  Complex constant{};
  std::vector<std::tuple<int, int, Complex>> one_body;  // (j, k, coeff) on 1D_jk
  std::vector<std::tuple<int, int, Complex>> two_body;  // (P, Q, coeff) on 2D_PQ

  Complex evaluate(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2) const;
  bool empty() const { return constant == 0.0 && one_body.empty() && two_body.empty(); }
};

/// Affine map from (1D, 2D) to a metric matrix, derived symbolically. Entries
/// are stored for row <= col; the mirror entry is the conjugate functional.
struct MetricMapSpec {
  MetricKind kind{};
  int r = 0;
  int dim = 0;
  std::vector<std::vector<int>> row_labels;

  struct Entry {
    int row = 0;
    int col = 0;
    SparseAffine functional;
  };
  std::vector<Entry> entries;

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2) const;
};

/// Derives the affine map by normal-ordering and reducing row*col+ operator
/// products. Deterministic; throws NotTwoBodyReducible if a 3-body residue
/// above tol survives (which would mean the family pairing is wrong).
MetricMapSpec derive_metric_map(MetricKind kind, int r, double tol = 1e-10);

/// Shared read-only map at the default tolerance, derived once per (kind, r).
/// Thread-safe; specs are immutable after construction.
const MetricMapSpec& cached_metric_map(MetricKind kind, int r);

void to_json(nlohmann::json& j, const MetricMapSpec& spec);
void from_json(const nlohmann::json& j, MetricMapSpec& spec);

}  // namespace rdmkit::opalg
