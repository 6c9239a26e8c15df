#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

#include "csad/errors.hpp"

namespace csad {

/// n x p block of observations; each row is one datapoint.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(Eigen::MatrixXd rows) : x_(std::move(rows)) {
    if (!x_.allFinite()) throw InvalidArgument("Dataset: non-finite entry");
  }

  std::size_t rows() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  bool empty() const noexcept { return x_.rows() == 0 || x_.cols() == 0; }

  const Eigen::MatrixXd& matrix() const noexcept { return x_; }

  /// Rows [begin, end) as a new dataset.
  Dataset slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows()) {
      throw InvalidArgument("Dataset::slice: rows [" + std::to_string(begin) + "," +
                            std::to_string(end) + ") out of range for " +
                            std::to_string(rows()) + " rows");
    }
    return Dataset(x_.middleRows(static_cast<Eigen::Index>(begin),
                                 static_cast<Eigen::Index>(end - begin)));
  }

  /// Rows of `a` followed by rows of `b`.
  static Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.cols() != b.cols()) throw InvalidArgument("Dataset::concat: column mismatch");
    Eigen::MatrixXd out(a.x_.rows() + b.x_.rows(), a.x_.cols());
    out << a.x_, b.x_;
    return Dataset(std::move(out));
  }

 private:
  Eigen::MatrixXd x_;
};

}  // namespace csad
