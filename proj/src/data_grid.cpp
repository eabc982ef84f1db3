#include "qtomo/data_grid.hpp"

#include <algorithm>
#include <stdexcept>

#include "qtomo/kernels.hpp"

namespace qtomo {

double DataGrid::sum() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double DataGrid::min() const {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double DataGrid::max() const {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

DataGrid grid_lincomb(double a, const DataGrid& x, double b,
                      const DataGrid& y) {
  if (!x.same_shape(y))
    throw std::invalid_argument("grid_lincomb: shape mismatch");
  DataGrid out = y;
  kernels::active().axpby(out.v.data(), a, x.v.data(), b, out.v.size());
  return out;
}

void grid_axpy(DataGrid& y, double a, const DataGrid& x) {
  if (!x.same_shape(y))
    throw std::invalid_argument("grid_axpy: shape mismatch");
  kernels::active().axpy(y.v.data(), a, x.v.data(), x.v.size());
}

} // namespace qtomo
