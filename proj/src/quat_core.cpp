#include "sqmf/quat_core.hpp"

#include <utility>
#include <vector>

namespace sqmf {

QuaternionVector::QuaternionVector(VectorXd s0, VectorXd s1, VectorXd s2,
                                   VectorXd s3) {
  planes_ = {std::move(s0), std::move(s1), std::move(s2), std::move(s3)};
  for (int l = 1; l < 4; ++l) {
    if (planes_[l].size() != planes_[0].size())
      throw DimensionError("quaternion vector planes differ in length");
  }
}

QuaternionMatrix::QuaternionMatrix(MatrixXd s0, MatrixXd s1, MatrixXd s2,
                                   MatrixXd s3) {
  planes_ = {std::move(s0), std::move(s1), std::move(s2), std::move(s3)};
  for (int l = 1; l < 4; ++l) {
    if (planes_[l].rows() != planes_[0].rows() ||
        planes_[l].cols() != planes_[0].cols())
      throw DimensionError("quaternion matrix planes differ in shape");
  }
}

QuaternionVector QuaternionMatrix::col(Index j) const {
  return {planes_[0].col(j), planes_[1].col(j), planes_[2].col(j),
          planes_[3].col(j)};
}

void QuaternionMatrix::set_col(Index j, const QuaternionVector& v) {
  for (int l = 0; l < 4; ++l) planes_[l].col(j) = v.component(l);
}

QuaternionMatrix QuaternionMatrix::select_columns(
    const std::vector<int>& indices) const {
  QuaternionMatrix out(rows(), static_cast<Index>(indices.size()));
  for (std::size_t t = 0; t < indices.size(); ++t)
    for (int l = 0; l < 4; ++l)
      out.component(l).col(static_cast<Index>(t)) = planes_[l].col(indices[t]);
  return out;
}

double QuaternionMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& p : planes_) s += p.squaredNorm();
  return std::sqrt(s);
}

double inner(const QuaternionVector& a, const QuaternionVector& b) {
  if (a.size() != b.size())
    throw DimensionError("inner: vector lengths differ");
  double s = 0.0;
  for (int l = 0; l < 4; ++l) s += a.component(l).dot(b.component(l));
  return s;
}

double norm2(const QuaternionVector& q) {
  double s = 0.0;
  for (int l = 0; l < 4; ++l) s += q.component(l).squaredNorm();
  return std::sqrt(s);
}

MatrixXd mat_stack(const QuaternionMatrix& q) {
  MatrixXd out(4 * q.rows(), q.cols());
  for (int l = 0; l < 4; ++l)
    out.middleRows(l * q.rows(), q.rows()) = q.component(l);
  return out;
}

MatrixXd mat_stack(const QuaternionVector& q) {
  MatrixXd out(q.size(), 4);
  for (int l = 0; l < 4; ++l) out.col(l) = q.component(l);
  return out;
}

QuaternionMatrix mul_real(const QuaternionMatrix& q, const MatrixXd& h) {
  if (q.cols() != h.rows())
    throw DimensionError("mul_real: inner dimensions differ");
  QuaternionMatrix out(q.rows(), h.cols());
  for (int l = 0; l < 4; ++l) out.component(l) = q.component(l) * h;
  return out;
}

QuaternionMatrix operator+(const QuaternionMatrix& a,
                           const QuaternionMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("quaternion matrix sum: shapes differ");
  QuaternionMatrix out(a.rows(), a.cols());
  for (int l = 0; l < 4; ++l)
    out.component(l) = a.component(l) + b.component(l);
  return out;
}

QuaternionMatrix operator-(const QuaternionMatrix& a,
                           const QuaternionMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("quaternion matrix difference: shapes differ");
  QuaternionMatrix out(a.rows(), a.cols());
  for (int l = 0; l < 4; ++l)
    out.component(l) = a.component(l) - b.component(l);
  return out;
}

}  // namespace sqmf
