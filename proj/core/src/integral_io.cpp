#include <fstream>
#include <iomanip>
#include <sstream>

#include "rdmkit/hamiltonians.hpp"

namespace rdmkit::hamiltonians {

void write_integrals(std::ostream& os, const IntegralSet& ints) {
  ints.validate();
  const PairBasis pairs(ints.r);
  os << "RDMKIT 1 r=" << ints.r << "\n";
  os << std::setprecision(17);
  for (int j = 0; j < ints.r; ++j)
    for (int k = j; k < ints.r; ++k) {
      const Complex z = ints.one_body(j, k);
      if (z == 0.0) continue;
      os << "h " << j << " " << k << " " << z.real() << " " << z.imag() << "\n";
    }
  for (int p = 0; p < pairs.size(); ++p)
    for (int q = p; q < pairs.size(); ++q) {
      const Complex z = ints.two_body(p, q);
      if (z == 0.0) continue;
      const auto [j, k] = pairs.pair(p);
      const auto [l, m] = pairs.pair(q);
      os << "v " << j << " " << k << " " << l << " " << m << " " << z.real() << " " << z.imag()
         << "\n";
    }
}

IntegralSet read_integrals(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> IntegralParseError {
    return IntegralParseError("integral file line " + std::to_string(lineno) + ": " + what);
  };

  auto next_content = [&](std::string& out) -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        out = line;
        return true;
      }
    }
    return false;
  };

  std::string content;
  if (!next_content(content)) throw IntegralParseError("integral file is empty");
  {
    std::istringstream hs(content);
    std::string magic, version, rfield;
    if (!(hs >> magic >> version >> rfield) || magic != "RDMKIT" || version != "1" ||
        rfield.rfind("r=", 0) != 0)
      throw fail("expected header 'RDMKIT 1 r=<int>'");
    content = rfield.substr(2);
  }
  int r = 0;
  try {
    r = std::stoi(content);
  } catch (...) {
    throw fail("unparsable orbital count");
  }
  if (r < 1 || r > kMaxOrbitals) throw fail("orbital count out of range [1, 16]");

  IntegralSet ints = IntegralSet::zero(r);
  const PairBasis pairs(r);

  while (next_content(content)) {
    std::istringstream ls(content);
    std::string tag;
    ls >> tag;
    if (tag == "h") {
      int j, k;
      double re, im;
      if (!(ls >> j >> k >> re >> im)) throw fail("expected 'h <j> <k> <re> <im>'");
      if (j < 0 || j >= r || k < 0 || k >= r) throw fail("one-body index out of range");
      ints.one_body(j, k) = Complex(re, im);
      ints.one_body(k, j) = std::conj(Complex(re, im));
    } else if (tag == "v") {
      int j, k, l, m;
      double re, im;
      if (!(ls >> j >> k >> l >> m >> re >> im))
        throw fail("expected 'v <j> <k> <l> <m> <re> <im>'");
      if (j < 0 || k < 0 || l < 0 || m < 0 || j >= r || k >= r || l >= r || m >= r)
        throw fail("two-body index out of range");
      if (j >= k || l >= m) throw fail("two-body indices must satisfy j<k and l<m");
      const int p = pairs.index(j, k), q = pairs.index(l, m);
      ints.two_body(p, q) = Complex(re, im);
      ints.two_body(q, p) = std::conj(Complex(re, im));
    } else {
      throw fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing content '" + extra + "'");
  }

  try {
    ints.validate();
  } catch (const std::exception& e) {
    throw IntegralParseError(std::string("integral file is inconsistent: ") + e.what());
  }
  return ints;
}

void write_integrals_file(const std::string& path, const IntegralSet& ints) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_integrals(os, ints);
}

IntegralSet read_integrals_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IntegralParseError("cannot open '" + path + "'");
  return read_integrals(is);
}

}  // namespace rdmkit::hamiltonians
