#pragma once

#include "sqmf/quat_core.hpp"

namespace sqmf {

// Default absolute tolerance for H_S membership of measured data.
inline constexpr double kStokesTol = 1e-9;

// Polarization ellipse parameterization: intensity s0, degree of
// polarization phi in [0,1], orientation psi and ellipticity chi in radians.
struct EllipseParams {
  double s0 = 1.0;
  double phi = 0.0;
  double psi = 0.0;
  double chi = 0.0;
};

struct StokesVector {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  Quaternion as_quaternion() const { return {s0, s1, s2, s3}; }
};

// Coherency matrix J = 1/2 [[s0+s2, s3+i s1], [s3-i s1, s0-s2]], returned as
// the two real diagonal entries plus the complex off-diagonal split in
// re/im, so no complex type is needed.
struct CoherencyMatrix {
  double j11 = 0.0;
  double j22 = 0.0;
  double j12_re = 0.0;
  double j12_im = 0.0;

  double trace() const { return j11 + j22; }
  double det() const { return j11 * j22 - (j12_re * j12_re + j12_im * j12_im); }
};

// Batch H_S membership scan over a matrix.
struct ConstraintReport {
  long total = 0;
  long violations = 0;
  // max of s1^2+s2^2+s3^2 - s0^2 over all entries (negative when all pass)
  double worst_excess = 0.0;
  long negative_intensity = 0;

  bool ok() const { return violations == 0; }
};

// True iff q0 >= -tol and q1^2+q2^2+q3^2 <= q0^2 + tol.
bool is_constrained(const Quaternion& q, double tol = kStokesTol);

// sqrt(q1^2+q2^2+q3^2)/q0; requires q0 > 0.
double degree_of_polarization(const Quaternion& q);

CoherencyMatrix coherency_matrix(const Quaternion& q);

StokesVector from_ellipse(const EllipseParams& p);

ConstraintReport validate_matrix(const QuaternionMatrix& q,
                                 double tol = kStokesTol);

}  // namespace sqmf
