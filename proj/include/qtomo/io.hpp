// Plain-text readers and writers for density matrices and phase-resolved
// data grids.  Both formats start with a magic token line so files cannot
// be confused, store dimensions next, and then the payload with 17
// significant digits (lossless for doubles).

#pragma once

#include <string>

#include "qtomo/data_grid.hpp"
#include "qtomo/hermitian.hpp"

namespace qtomo {

// Format: "QTOMO-HERM-1", then the dimension N, then N*N lines "re,im"
// in row-major order.  Loading re-checks self-adjointness.
void save_matrix(const HermitianMatrix& m, const std::string& path);
HermitianMatrix load_matrix(const std::string& path);

// Format: "QTOMO-GRID-1", then "n_theta n_l", then n_theta lines of n_l
// comma-separated values.
void save_grid(const DataGrid& g, const std::string& path);
DataGrid load_grid(const std::string& path);

} // namespace qtomo
