#include "rdmkit/solver.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cctype>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace rdmkit::solver {

ConditionSet ConditionSet::parse(const std::string& text) {
  std::string upper;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));

  ConditionSet set;
  if (upper == "D" || upper == "D2") return set;
  if (upper == "DQ") {
    set.q2 = true;
    return set;
  }
  if (upper == "DQG") {
    set.q2 = set.g2 = true;
    return set;
  }
  if (upper == "DQGT1") {
    set.q2 = set.g2 = set.t1 = true;
    return set;
  }
  if (upper == "DQGT1T2") {
    set.q2 = set.g2 = set.t1 = set.t2gen = true;
    return set;
  }

  std::stringstream ss(upper);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "D2") continue;  // always on
    if (tok == "Q2")
      set.q2 = true;
    else if (tok == "G2")
      set.g2 = true;
    else if (tok == "T1")
      set.t1 = true;
    else if (tok == "T2" || tok == "T2GEN")
      set.t2gen = true;
    else
      throw std::invalid_argument("unknown condition '" + tok + "'");
  }
  return set;
}

std::string ConditionSet::name() const {
  std::string s = "D";
  if (q2) s += "Q";
  if (g2) s += "G";
  if (t1) s += "T1";
  if (t2gen) s += "T2";
  return s;
}

std::vector<opalg::MetricKind> ConditionSet::flagged_kinds() const {
  std::vector<opalg::MetricKind> kinds;
  if (q2) kinds.push_back(opalg::MetricKind::Q2);
  if (g2) kinds.push_back(opalg::MetricKind::G2);
  if (t1) kinds.push_back(opalg::MetricKind::T1);
  if (t2gen) kinds.push_back(opalg::MetricKind::T2gen);
  return kinds;
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::domain_error("project_psd needs a square matrix");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::domain_error("project_psd needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/// Isometric real coordinates of a Hermitian d x d matrix: d diagonal entries
/// followed by (sqrt2 Re, sqrt2 Im) per off-diagonal pair, pair-lexicographic.
struct HermitianCoords {
  int d = 0;
  PairBasis pairs;

  explicit HermitianCoords(int dim) : d(dim), pairs(std::max(dim, 2)) {}

  int size() const { return d * d; }
  int diag_index(int a) const { return a; }
  int re_index(int a, int b) const { return d + 2 * pairs.index(a, b); }
  int im_index(int a, int b) const { return d + 2 * pairs.index(a, b) + 1; }

  Eigen::VectorXd vec(const Eigen::MatrixXcd& m) const {
    Eigen::VectorXd x(size());
    for (int a = 0; a < d; ++a) x(diag_index(a)) = m(a, a).real();
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        x(re_index(a, b)) = kSqrt2 * m(a, b).real();
        x(im_index(a, b)) = kSqrt2 * m(a, b).imag();
      }
    return x;
  }

  Eigen::MatrixXcd mat(const Eigen::VectorXd& x) const {
    Eigen::MatrixXcd m(d, d);
    for (int a = 0; a < d; ++a) m(a, a) = x(diag_index(a));
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const Complex z(x(re_index(a, b)) / kSqrt2, x(im_index(a, b)) / kSqrt2);
        m(a, b) = z;
        m(b, a) = std::conj(z);
      }
    return m;
  }
};

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Adds the real-linear expansion of "output Hermitian entry (s,t) +=
/// c * input entry (p,q)" to the triplet list (upper-triangle output rows).
void add_complex_link(Triplets& trips, const HermitianCoords& out, const HermitianCoords& in,
                      int s, int t, int p, int q, Complex c) {
  if (s > t) {  // canonicalize onto the (t,s) coordinates: Y_ts = conj(Y_st)
    add_complex_link(trips, out, in, t, s, q, p, std::conj(c));
    return;
  }
  // input entry (p,q) in real coords: X_pq = alpha + i beta
  struct Term {
    int idx;
    double coeff;
  };
  std::array<Term, 2> alpha{};  // Re X_pq
  std::array<Term, 2> beta{};   // Im X_pq
  int n_alpha = 0, n_beta = 0;
  if (p == q) {
    alpha[0] = {in.diag_index(p), 1.0};
    n_alpha = 1;
  } else if (p < q) {
    alpha[0] = {in.re_index(p, q), 1.0 / kSqrt2};
    beta[0] = {in.im_index(p, q), 1.0 / kSqrt2};
    n_alpha = n_beta = 1;
  } else {
    alpha[0] = {in.re_index(q, p), 1.0 / kSqrt2};
    beta[0] = {in.im_index(q, p), -1.0 / kSqrt2};
    n_alpha = n_beta = 1;
  }

  // Y_st += c X_pq: Re += Re c * alpha - Im c * beta; Im += Im c * alpha + Re c * beta
  auto emit = [&](int row, double scale_re, double scale_im) {
    for (int i = 0; i < n_alpha; ++i) {
      const double v = scale_re * c.real() * alpha[i].coeff + scale_im * c.imag() * alpha[i].coeff;
      if (v != 0.0) trips.emplace_back(row, alpha[i].idx, v);
    }
    for (int i = 0; i < n_beta; ++i) {
      const double v = -scale_re * c.imag() * beta[i].coeff + scale_im * c.real() * beta[i].coeff;
      if (v != 0.0) trips.emplace_back(row, beta[i].idx, v);
    }
  };

  if (s == t) {
    emit(out.diag_index(s), 1.0, 0.0);  // real part only; imag cancels structurally
  } else {
    emit(out.re_index(s, t), kSqrt2, 0.0);
    emit(out.im_index(s, t), 0.0, kSqrt2);
  }
}

/// (P,Q,coeff) expansion of 1D_jk over pair-basis 2-RDM entries.
std::vector<std::tuple<int, int, Complex>> contraction_triplets(int j, int k, int r,
                                                                int n_particles) {
  const PairBasis pairs(r);
  const double w = 1.0 / static_cast<double>(n_particles - 1);
  std::vector<std::tuple<int, int, Complex>> out;
  for (int m = 0; m < r; ++m) {
    if (m == j || m == k) continue;
    const auto [pj, sj] = pairs.signed_index(j, m);
    const auto [pk, sk] = pairs.signed_index(k, m);
    out.emplace_back(pj, pk, Complex(w * sj * sk, 0.0));
  }
  return out;
}

struct Block {
  opalg::MetricKind kind;
  int dim = 0;
  Eigen::SparseMatrix<double> linear;  // block coords x primal coords
  Eigen::VectorXd constant;            // block coords
  HermitianCoords coords{1};
};

Block build_block(opalg::MetricKind kind, int r, int n_particles, const HermitianCoords& primal) {
  const auto& spec = opalg::cached_metric_map(kind, r);
  Block blk;
  blk.kind = kind;
  blk.dim = spec.dim;
  blk.coords = HermitianCoords(spec.dim);

  Eigen::MatrixXcd const_mat = Eigen::MatrixXcd::Zero(spec.dim, spec.dim);
  Triplets trips;
  for (const auto& e : spec.entries) {
    // entries are stored for row <= col; the Hermitian mirror shares the same
    // real coordinates, so each entry is expanded exactly once
    const_mat(e.row, e.col) += e.functional.constant;
    if (e.row != e.col) const_mat(e.col, e.row) += std::conj(e.functional.constant);

    auto link = [&](int p, int q, Complex c) {
      add_complex_link(trips, blk.coords, primal, e.row, e.col, p, q, c);
    };
    for (const auto& [p, q, c] : e.functional.two_body) link(p, q, c);
    for (const auto& [j, k, c] : e.functional.one_body)
      for (const auto& [p, q, cc] : contraction_triplets(j, k, r, n_particles)) link(p, q, c * cc);
  }
  blk.linear.resize(blk.coords.size(), primal.size());
  blk.linear.setFromTriplets(trips.begin(), trips.end());
  blk.constant = blk.coords.vec(const_mat);
  return blk;
}

}  // namespace

SolverResult lower_bound(const hamiltonians::IntegralSet& ints, int n_particles,
                         const ConditionSet& conds, const SolverOptions& opts) {
  ints.validate();
  if (n_particles < 2) throw std::domain_error("lower_bound needs N >= 2");
  if (n_particles > ints.r) throw std::domain_error("N exceeds the orbital count");
  const int r = ints.r;
  const PairBasis pairs(r);
  const int m = pairs.size();
  const HermitianCoords primal(m);
  const int n = primal.size();

  const auto k2 = hamiltonians::reduced_hamiltonian(ints, n_particles);
  const Eigen::VectorXd c_obj = primal.vec(k2.k2.conjugate());
  const double trace_target = static_cast<double>(binomial(n_particles, 2));
  const Eigen::VectorXd a_trace = primal.vec(Eigen::MatrixXcd::Identity(m, m));

  // Cone blocks: D2 (identity map), Q1, then the flagged conditions.
  std::vector<Block> blocks;
  {
    Block d2;
    d2.kind = opalg::MetricKind::D2;
    d2.dim = m;
    d2.coords = HermitianCoords(m);
    d2.linear.resize(n, n);
    d2.linear.setIdentity();
    d2.constant = Eigen::VectorXd::Zero(n);
    blocks.push_back(std::move(d2));
  }
  blocks.push_back(build_block(opalg::MetricKind::Q1, r, n_particles, primal));
  for (opalg::MetricKind kind : conds.flagged_kinds())
    blocks.push_back(build_block(kind, r, n_particles, primal));

  // Normal-equation matrix: G = a a^T + sum_i L_i^T L_i (PSD, >= I from D2).
  Eigen::MatrixXd gram = a_trace * a_trace.transpose();
  for (const auto& blk : blocks) {
    const Eigen::SparseMatrix<double> gtg = blk.linear.transpose() * blk.linear;
    gram += Eigen::MatrixXd(gtg);
  }
  const Eigen::LDLT<Eigen::MatrixXd> gram_ldlt(gram);
  if (gram_ldlt.info() != Eigen::Success)
    throw std::runtime_error("normal-equation factorization failed");

  // Scaled ADMM state.
  const std::size_t nb = blocks.size();
  double rho = opts.rho;
  const double alpha = opts.over_relaxation;
  Eigen::VectorXd x = a_trace * (trace_target / a_trace.squaredNorm());
  std::vector<Eigen::VectorXd> slack(nb), dual(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const Eigen::VectorXd w = blocks[i].linear * x + blocks[i].constant;
    slack[i] = blocks[i].coords.vec(project_psd(blocks[i].coords.mat(w)));
    dual[i] = Eigen::VectorXd::Zero(blocks[i].coords.size());
  }
  double dual_trace = 0.0;

  const double scale_p = 1.0 + std::abs(trace_target);
  const double scale_d = 1.0 + c_obj.norm();
  double window_obj = c_obj.dot(x);
  int iter = 0;
  bool converged = false;

  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    // x-update: exact minimizer of the quadratic model
    Eigen::VectorXd rhs = -c_obj / rho + a_trace * (trace_target - dual_trace);
    for (std::size_t i = 0; i < nb; ++i)
      rhs += blocks[i].linear.transpose() * (slack[i] - blocks[i].constant - dual[i]);
    x = gram_ldlt.solve(rhs);

    // slack updates with over-relaxation, then scaled dual ascent
    double primal_res = std::abs(a_trace.dot(x) - trace_target);
    Eigen::VectorXd dual_change = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < nb; ++i) {
      const Eigen::VectorXd w = blocks[i].linear * x + blocks[i].constant;
      const Eigen::VectorXd v = alpha * w + (1.0 - alpha) * slack[i];
      const Eigen::VectorXd s_new =
          blocks[i].coords.vec(project_psd(blocks[i].coords.mat(v + dual[i])));
      dual[i] += v - s_new;
      dual_change += blocks[i].linear.transpose() * (s_new - slack[i]);
      slack[i] = s_new;
      primal_res = std::max(primal_res, (w - slack[i]).norm());
    }
    dual_trace += alpha * (a_trace.dot(x) - trace_target);
    const double dual_res = rho * dual_change.norm();

    const double obj = c_obj.dot(x);
    if (opts.verbose && iter % 100 == 0)
      std::cerr << "iter " << iter << " obj " << obj << " primal " << primal_res << " dual "
                << dual_res << " rho " << rho << "\n";

    if (primal_res <= opts.linear_tol * scale_p && dual_res <= opts.psd_tol * scale_d) {
      converged = true;
      break;
    }
    // stall exit: primal-feasible and the objective flat over a 100-iteration
    // window (consecutive-iteration changes are a poor signal for the slow
    // geometric tail of the method)
    if (iter % 100 == 0) {
      if (primal_res <= opts.linear_tol * scale_p &&
          std::abs(obj - window_obj) < opts.stall_tol * (1.0 + std::abs(obj))) {
        converged = true;
        break;
      }
      window_obj = obj;
    }

    // penalty balancing (scaled duals shrink/grow inversely)
    if (iter % 10 == 0) {
      if (primal_res > 5.0 * dual_res && rho < 1e8) {
        rho *= 1.5;
        for (auto& u : dual) u /= 1.5;
        dual_trace /= 1.5;
      } else if (dual_res > 5.0 * primal_res && rho > 1e-6) {
        rho /= 1.5;
        for (auto& u : dual) u *= 1.5;
        dual_trace *= 1.5;
      }
    }
  }

  SolverResult result;
  result.iterations = std::min(iter, opts.max_iterations);
  result.energy = c_obj.dot(x);
  result.d2 = primal.mat(x);
  result.primal_feasibility = std::abs(a_trace.dot(x) - trace_target);
  result.condition_feasibility = 0.0;
  for (const auto& blk : blocks) {
    const Eigen::VectorXd w = blk.linear * x + blk.constant;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk.coords.mat(w));
    result.condition_feasibility = std::min(result.condition_feasibility, es.eigenvalues()(0));
  }
  // the converged flag certifies the reported feasibilities
  result.converged =
      converged && result.primal_feasibility < 1e-7 && result.condition_feasibility > -1e-7;
  return result;
}

void to_json(nlohmann::json& j, const SolverResult& result) {
  j = nlohmann::json{{"energy", result.energy},
                     {"primal_feasibility", result.primal_feasibility},
                     {"condition_feasibility", result.condition_feasibility},
                     {"iterations", result.iterations},
                     {"converged", result.converged}};
}

}  // namespace rdmkit::solver
