#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "sqmf/errors.hpp"

namespace sqmf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// One Stokes sample q0 + i q1 + j q2 + k q3.
struct Quaternion {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;

  double component(int l) const {
    switch (l) {
      case 0: return q0;
      case 1: return q1;
      case 2: return q2;
      default: return q3;
    }
  }
};

inline Quaternion conjugate(const Quaternion& q) {
  return {q.q0, -q.q1, -q.q2, -q.q3};
}

inline double modulus(const Quaternion& q) {
  return std::sqrt(q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3);
}

// Quaternion vector stored as four real planes of equal length.
class QuaternionVector {
 public:
  QuaternionVector() = default;
  explicit QuaternionVector(Index m) {
    for (auto& p : planes_) p = VectorXd::Zero(m);
  }
  QuaternionVector(VectorXd s0, VectorXd s1, VectorXd s2, VectorXd s3);

  Index size() const { return planes_[0].size(); }
  const VectorXd& component(int l) const { return planes_[l]; }
  VectorXd& component(int l) { return planes_[l]; }

  Quaternion entry(Index i) const {
    return {planes_[0][i], planes_[1][i], planes_[2][i], planes_[3][i]};
  }

 private:
  std::array<VectorXd, 4> planes_;
};

// Quaternion matrix as four aligned real planes S0..S3 (structure of arrays).
class QuaternionMatrix {
 public:
  QuaternionMatrix() = default;
  QuaternionMatrix(Index m, Index n) {
    for (auto& p : planes_) p = MatrixXd::Zero(m, n);
  }
  QuaternionMatrix(MatrixXd s0, MatrixXd s1, MatrixXd s2, MatrixXd s3);

  Index rows() const { return planes_[0].rows(); }
  Index cols() const { return planes_[0].cols(); }

  const MatrixXd& component(int l) const { return planes_[l]; }
  MatrixXd& component(int l) { return planes_[l]; }

  Quaternion entry(Index i, Index j) const {
    return {planes_[0](i, j), planes_[1](i, j), planes_[2](i, j),
            planes_[3](i, j)};
  }

  QuaternionVector col(Index j) const;
  void set_col(Index j, const QuaternionVector& v);

  // Columns of this matrix at the given indices, in order.
  QuaternionMatrix select_columns(const std::vector<int>& indices) const;

  double frobenius_norm() const;

 private:
  std::array<MatrixXd, 4> planes_;
};

// Sum over the four planes of S_l(a)' S_l(b).
double inner(const QuaternionVector& a, const QuaternionVector& b);

double norm2(const QuaternionVector& q);

// Vertical stack [S0; S1; S2; S3] (4m x n).
MatrixXd mat_stack(const QuaternionMatrix& q);

// Horizontal arrangement [S0 S1 S2 S3] (m x 4).  The Frobenius norm agrees
// with the 4m x 1 layout, so norm identities hold for either.
MatrixXd mat_stack(const QuaternionVector& q);

// Planewise product S_l(Q) * H.
QuaternionMatrix mul_real(const QuaternionMatrix& q, const MatrixXd& h);

QuaternionMatrix operator+(const QuaternionMatrix& a, const QuaternionMatrix& b);
QuaternionMatrix operator-(const QuaternionMatrix& a, const QuaternionMatrix& b);

}  // namespace sqmf
