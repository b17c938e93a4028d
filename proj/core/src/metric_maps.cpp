#include "rdmkit/metric_maps.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace rdmkit::opalg {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::D1: return "D1";
    case MetricKind::Q1: return "Q1";
    case MetricKind::D2: return "D2";
    case MetricKind::Q2: return "Q2";
    case MetricKind::G2: return "G2";
    case MetricKind::T1: return "T1";
    case MetricKind::T2gen: return "T2gen";
  }
  throw std::logic_error("unknown metric kind");
}

MetricKind metric_kind_from_string(const std::string& name) {
  for (MetricKind k : kAllMetricKinds)
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown metric kind '" + name + "'");
}

namespace {

Monomial make_monomial(std::initializer_list<Factor> fs) {
  Monomial m;
  for (Factor f : fs) m.push_back(f);
  return m;
}

}  // namespace

MetricBasis metric_operator_basis(MetricKind kind, int r) {
  require_orbital_count(r);
  MetricBasis basis;
  basis.kind = kind;
  basis.r = r;

  const auto cr = [](int j) { return Factor::creation(j); };
  const auto an = [](int j) { return Factor::annihilation(j); };

  switch (kind) {
    case MetricKind::D1:
    case MetricKind::Q1: {
      basis.dim = r;
      MetricFamily fam;
      fam.weight = 1.0;
      for (int j = 0; j < r; ++j) {
        basis.row_labels.push_back({j});
        fam.ops.push_back(make_monomial({kind == MetricKind::D1 ? cr(j) : an(j)}));
      }
      basis.families.push_back(std::move(fam));
      break;
    }
    case MetricKind::D2:
    case MetricKind::Q2: {
      const PairBasis pairs(r);
      basis.dim = pairs.size();
      MetricFamily fam;
      fam.weight = 1.0;
      for (int p = 0; p < pairs.size(); ++p) {
        const auto [j, k] = pairs.pair(p);
        basis.row_labels.push_back({j, k});
        fam.ops.push_back(kind == MetricKind::D2 ? make_monomial({cr(j), cr(k)})
                                                 : make_monomial({an(j), an(k)}));
      }
      basis.families.push_back(std::move(fam));
      break;
    }
    case MetricKind::G2: {
      basis.dim = r * r;
      MetricFamily fam;
      fam.weight = 1.0;
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) {
          basis.row_labels.push_back({j, k});
          fam.ops.push_back(make_monomial({cr(j), an(k)}));
        }
      basis.families.push_back(std::move(fam));
      break;
    }
    case MetricKind::T1: {
      const TupleBasis triples(r, 3);
      basis.dim = triples.size();
      MetricFamily particle, hole;
      particle.weight = hole.weight = 0.5;
      hole.transposed = true;
      for (int t = 0; t < triples.size(); ++t) {
        const auto& jkl = triples.tuple(t);
        basis.row_labels.push_back(jkl);
        particle.ops.push_back(make_monomial({cr(jkl[0]), cr(jkl[1]), cr(jkl[2])}));
        hole.ops.push_back(make_monomial({an(jkl[0]), an(jkl[1]), an(jkl[2])}));
      }
      basis.families.push_back(std::move(particle));
      basis.families.push_back(std::move(hole));
      break;
    }
    case MetricKind::T2gen: {
      const PairBasis pairs(r);
      const int triple_count = pairs.size() * r;
      basis.dim = triple_count + 2 * r;
      MetricFamily particle, hole;
      particle.weight = hole.weight = 0.5;
      hole.transposed = true;
      for (int p = 0; p < pairs.size(); ++p) {
        const auto [j, k] = pairs.pair(p);
        for (int l = 0; l < r; ++l) {
          basis.row_labels.push_back({j, k, l});
          particle.ops.push_back(make_monomial({cr(j), cr(k), an(l)}));
          hole.ops.push_back(make_monomial({an(j), an(k), cr(l)}));
        }
      }
      // one-body border of the particle family
      for (int p = 0; p < r; ++p) {
        basis.row_labels.push_back({p});
        particle.ops.push_back(make_monomial({cr(p)}));
        hole.ops.push_back(std::nullopt);
      }
      // independent one-body border of the hole family
      for (int p = 0; p < r; ++p) {
        basis.row_labels.push_back({p});
        particle.ops.push_back(std::nullopt);
        hole.ops.push_back(make_monomial({an(p)}));
      }
      basis.families.push_back(std::move(particle));
      basis.families.push_back(std::move(hole));
      break;
    }
  }
  return basis;
}

int metric_dimension(MetricKind kind, int r) {
  switch (kind) {
    case MetricKind::D1:
    case MetricKind::Q1: return r;
    case MetricKind::D2:
    case MetricKind::Q2: return static_cast<int>(binomial(r, 2));
    case MetricKind::G2: return r * r;
    case MetricKind::T1: return static_cast<int>(binomial(r, 3));
    case MetricKind::T2gen: return static_cast<int>(binomial(r, 2)) * r + 2 * r;
  }
  throw std::logic_error("unknown metric kind");
}

Complex SparseAffine::evaluate(const Eigen::MatrixXcd& d1, const Eigen::MatrixXcd& d2) const {
  Complex v = constant;
  for (const auto& [j, k, c] : one_body) v += c * d1(j, k);
  for (const auto& [p, q, c] : two_body) v += c * d2(p, q);
  return v;
}

Eigen::MatrixXcd MetricMapSpec::apply(const Eigen::MatrixXcd& d1,
                                      const Eigen::MatrixXcd& d2) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : entries) {
    const Complex v = e.functional.evaluate(d1, d2);
    m(e.row, e.col) = v;
    if (e.row != e.col) m(e.col, e.row) = std::conj(v);
  }
  return m;
}

MetricMapSpec derive_metric_map(MetricKind kind, int r, double tol) {
  const MetricBasis basis = metric_operator_basis(kind, r);
  MetricMapSpec spec;
  spec.kind = kind;
  spec.r = r;
  spec.dim = basis.dim;
  spec.row_labels = basis.row_labels;

  for (int s = 0; s < basis.dim; ++s) {
    for (int t = s; t < basis.dim; ++t) {
      OperatorPolynomial combined;
      bool touched = false;
      for (const auto& fam : basis.families) {
        const auto& os = fam.ops[static_cast<std::size_t>(fam.transposed ? t : s)];
        const auto& ot = fam.ops[static_cast<std::size_t>(fam.transposed ? s : t)];
        if (!os || !ot) continue;
        touched = true;
        OperatorPolynomial left = OperatorPolynomial::from_monomial(*os, fam.weight);
        OperatorPolynomial right = OperatorPolynomial::from_monomial(*ot).adjoint();
        combined += normal_order(left * right);
      }
      if (!touched || combined.empty()) continue;
      const RdmFunctional f = reduce_to_rdm_functional(combined, r, tol);

      SparseAffine sa;
      sa.constant = f.constant;
      for (int j = 0; j < f.one_body.rows(); ++j)
        for (int k = 0; k < f.one_body.cols(); ++k)
          if (f.one_body(j, k) != 0.0) sa.one_body.emplace_back(j, k, f.one_body(j, k));
      for (int p = 0; p < f.two_body.rows(); ++p)
        for (int q = 0; q < f.two_body.cols(); ++q)
          if (f.two_body(p, q) != 0.0) sa.two_body.emplace_back(p, q, f.two_body(p, q));
      if (sa.empty()) continue;
      spec.entries.push_back({s, t, std::move(sa)});
    }
  }
  return spec;
}

const MetricMapSpec& cached_metric_map(MetricKind kind, int r) {
  static std::mutex mutex;
  static std::map<std::pair<MetricKind, int>, std::unique_ptr<const MetricMapSpec>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{kind, r}];
  if (!slot) slot = std::make_unique<const MetricMapSpec>(derive_metric_map(kind, r));
  return *slot;
}

void to_json(nlohmann::json& j, const MetricMapSpec& spec) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : spec.entries) {
    nlohmann::json one = nlohmann::json::array();
    for (const auto& [a, b, c] : e.functional.one_body)
      one.push_back({a, b, c.real(), c.imag()});
    nlohmann::json two = nlohmann::json::array();
    for (const auto& [a, b, c] : e.functional.two_body)
      two.push_back({a, b, c.real(), c.imag()});
    entries.push_back({{"row", e.row},
                       {"col", e.col},
                       {"constant", {e.functional.constant.real(), e.functional.constant.imag()}},
                       {"one_body", std::move(one)},
                       {"two_body", std::move(two)}});
  }
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"r", spec.r},
                     {"dim", spec.dim},
                     {"rows", spec.row_labels},
                     {"entries", std::move(entries)}};
}

void from_json(const nlohmann::json& j, MetricMapSpec& spec) {
  spec.kind = metric_kind_from_string(j.at("kind").get<std::string>());
  spec.r = j.at("r").get<int>();
  spec.dim = j.at("dim").get<int>();
  spec.row_labels = j.at("rows").get<std::vector<std::vector<int>>>();
  spec.entries.clear();
  for (const auto& e : j.at("entries")) {
    MetricMapSpec::Entry entry;
    entry.row = e.at("row").get<int>();
    entry.col = e.at("col").get<int>();
    const auto& cc = e.at("constant");
    entry.functional.constant = Complex(cc.at(0).get<double>(), cc.at(1).get<double>());
    for (const auto& t : e.at("one_body"))
      entry.functional.one_body.emplace_back(
          t.at(0).get<int>(), t.at(1).get<int>(),
          Complex(t.at(2).get<double>(), t.at(3).get<double>()));
    for (const auto& t : e.at("two_body"))
      entry.functional.two_body.emplace_back(
          t.at(0).get<int>(), t.at(1).get<int>(),
          Complex(t.at(2).get<double>(), t.at(3).get<double>()));
    spec.entries.push_back(std::move(entry));
  }
}

}  // namespace rdmkit::opalg
