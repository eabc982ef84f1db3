#pragma once

#include <cstddef>
#include <vector>

namespace qtomo {

// Real measurement grid indexed by (phase t, outcome l), stored row-major
// with t as the slow index.
struct DataGrid {
  int n_theta = 0;
  int n_l = 0;
  std::vector<double> v;

  DataGrid() = default;
  DataGrid(int nt, int nl)
      : n_theta(nt), n_l(nl),
        v(static_cast<std::size_t>(nt) * static_cast<std::size_t>(nl), 0.0) {}

  std::size_t size() const { return v.size(); }
  double at(int t, int l) const {
    return v[static_cast<std::size_t>(t) * n_l + l];
  }
  double& at(int t, int l) {
    return v[static_cast<std::size_t>(t) * n_l + l];
  }
  bool same_shape(const DataGrid& o) const {
    return n_theta == o.n_theta && n_l == o.n_l;
  }

  double sum() const;
  double min() const;
  double max() const;
};

// out = a*x + b*y entrywise; shapes must match.
DataGrid grid_lincomb(double a, const DataGrid& x, double b,
                      const DataGrid& y);

// y += a*x entrywise.
void grid_axpy(DataGrid& y, double a, const DataGrid& x);

} // namespace qtomo
