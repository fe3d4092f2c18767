#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace speechpipe {

// Row-major matrices throughout: rows are time frames, columns are feature
// or channel dimensions. Row-major keeps frame rows contiguous for file I/O
// and numpy interop.
template <typename S>
using MatrixT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using VectorT = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatrixF = MatrixT<float>;
using MatrixD = MatrixT<double>;
using VectorF = VectorT<float>;
using VectorD = VectorT<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or length disagreement between related inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Unreadable, truncated, or version-mismatched file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input violates an operation precondition (bad values, not just shapes).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A pluggable component (scorer, tagger, transcriber) broke its contract.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace speechpipe
