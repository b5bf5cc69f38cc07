#pragma once

#include <Eigen/Dense>

#include "mfe/types.hpp"

namespace mfe {

inline constexpr double kSingularValueThreshold = 1e-10;

/// Orthonormal basis (columns) of ker(a) from the right singular vectors whose
/// singular value falls below threshold * max(1, largest singular value).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
orthonormal_nullspace(const Eigen::MatrixBase<Derived> &a,
                      double threshold = kSingularValueThreshold) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::BDCSVD<Mat> svd(a.derived(), Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  const double cutoff = threshold * std::max(1.0, s.size() ? double(s(0)) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived> &a,
                            double threshold = kSingularValueThreshold) {
  return a.cols() - orthonormal_nullspace(a, threshold).cols();
}

/// Orthonormal basis of the column space of a.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
orthonormal_range(const Eigen::MatrixBase<Derived> &a,
                  double threshold = kSingularValueThreshold) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::BDCSVD<Mat> svd(a.derived(), Eigen::ComputeFullU);
  const auto &s = svd.singularValues();
  const double cutoff = threshold * std::max(1.0, s.size() ? double(s(0)) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace mfe
