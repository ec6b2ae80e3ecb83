#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

#include "symtensor/tensor.hpp"

namespace symtensor {

// Text tensor format:
//   symtensor m n k
//   i1 i2 ... im value        (k lines, 1-based non-decreasing indices)
// Values are written with 17 significant digits so that write/read
// round-trips reproduce every double exactly.

void write_tensor(const SymTensorSparse& t, std::ostream& out);
void write_tensor_file(const SymTensorSparse& t, const std::string& path);

SymTensorSparse read_tensor(std::istream& in);
SymTensorSparse read_tensor_file(const std::string& path);

// Matrix-set format (covariance inputs for the degree-4 builder):
//   matrices T n
//   then T blocks of n rows of n decimals.
std::vector<Eigen::MatrixXd> read_matrices(std::istream& in);
std::vector<Eigen::MatrixXd> read_matrices_file(const std::string& path);

/// Formats one double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace symtensor
