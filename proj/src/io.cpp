#include "qtomo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qtomo {

namespace {

constexpr const char* kMatrixMagic = "QTOMO-HERM-1";
constexpr const char* kGridMagic = "QTOMO-GRID-1";

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

void expect_magic(std::istream& is, const char* magic,
                  const std::string& path) {
  std::string line;
  if (!std::getline(is, line) || line != magic)
    throw std::runtime_error(path + ": missing magic token " +
                             std::string(magic));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void save_matrix(const HermitianMatrix& m, const std::string& path) {
  std::ofstream os = open_out(path);
  os << kMatrixMagic << "\n" << m.dim() << "\n";
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      const cplx v = m.at(i, j);
      os << fmt(v.real()) << "," << fmt(v.imag()) << "\n";
    }
  if (!os) throw std::runtime_error("write failed: " + path);
}

HermitianMatrix load_matrix(const std::string& path) {
  std::ifstream is = open_in(path);
  expect_magic(is, kMatrixMagic, path);
  int dim = 0;
  if (!(is >> dim) || dim < 1)
    throw std::runtime_error(path + ": bad matrix dimension");
  std::vector<cplx> entries(static_cast<std::size_t>(dim) * dim);
  for (auto& e : entries) {
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re >> comma >> im) || comma != ',')
      throw std::runtime_error(path + ": malformed matrix entry");
    e = cplx(re, im);
  }
  return make_hermitian(dim, entries);
}

void save_grid(const DataGrid& g, const std::string& path) {
  std::ofstream os = open_out(path);
  os << kGridMagic << "\n" << g.n_theta << " " << g.n_l << "\n";
  for (int t = 0; t < g.n_theta; ++t) {
    for (int l = 0; l < g.n_l; ++l) {
      if (l > 0) os << ",";
      os << fmt(g.at(t, l));
    }
    os << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

DataGrid load_grid(const std::string& path) {
  std::ifstream is = open_in(path);
  expect_magic(is, kGridMagic, path);
  int n_theta = 0, n_l = 0;
  if (!(is >> n_theta >> n_l) || n_theta < 1 || n_l < 1)
    throw std::runtime_error(path + ": bad grid shape");
  DataGrid g(n_theta, n_l);
  for (int t = 0; t < n_theta; ++t)
    for (int l = 0; l < n_l; ++l) {
      double v = 0.0;
      if (l > 0) {
        char comma = 0;
        if (!(is >> comma) || comma != ',')
          throw std::runtime_error(path + ": malformed grid row");
      }
      if (!(is >> v)) throw std::runtime_error(path + ": malformed grid value");
      g.at(t, l) = v;
    }
  return g;
}

} // namespace qtomo
