#pragma once

#include <Eigen/Dense>

#include "pm/rational.hpp"

namespace pm {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RatMatrix = DenseMatrix<Rational>;
using RatVector = DenseVector<Rational>;
using IntMatrix = DenseMatrix<Integer>;

/// Exact dot product of two equally sized vectors.
template <class Scalar>
Scalar dot(const DenseVector<Scalar>& a, const DenseVector<Scalar>& b) {
  Scalar acc{};
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * b(i);
  return acc;
}

}  // namespace pm
