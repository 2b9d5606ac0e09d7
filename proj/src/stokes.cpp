#include "sqmf/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sqmf {

bool is_constrained(const Quaternion& q, double tol) {
  const double im2 = q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3;
  return q.q0 >= -tol && im2 <= q.q0 * q.q0 + tol;
}

double degree_of_polarization(const Quaternion& q) {
  if (q.q0 <= 0.0)
    throw DomainError("degree_of_polarization: intensity must be positive");
  return std::sqrt(q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3) / q.q0;
}

CoherencyMatrix coherency_matrix(const Quaternion& q) {
  CoherencyMatrix j;
  j.j11 = 0.5 * (q.q0 + q.q2);
  j.j22 = 0.5 * (q.q0 - q.q2);
  j.j12_re = 0.5 * q.q3;
  j.j12_im = 0.5 * q.q1;
  return j;
}

StokesVector from_ellipse(const EllipseParams& p) {
  StokesVector s;
  s.s0 = p.s0;
  const double c2chi = std::cos(2.0 * p.chi);
  s.s1 = p.phi * p.s0 * std::cos(2.0 * p.psi) * c2chi;
  s.s2 = p.phi * p.s0 * std::sin(2.0 * p.psi) * c2chi;
  s.s3 = p.phi * p.s0 * std::sin(2.0 * p.chi);
  return s;
}

ConstraintReport validate_matrix(const QuaternionMatrix& q, double tol) {
  ConstraintReport rep;
  rep.total = static_cast<long>(q.rows()) * static_cast<long>(q.cols());
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < q.cols(); ++j) {
    for (Index i = 0; i < q.rows(); ++i) {
      const Quaternion e = q.entry(i, j);
      const double excess =
          e.q1 * e.q1 + e.q2 * e.q2 + e.q3 * e.q3 - e.q0 * e.q0;
      rep.worst_excess = std::max(rep.worst_excess, excess);
      if (e.q0 < -tol) ++rep.negative_intensity;
      if (!is_constrained(e, tol)) ++rep.violations;
    }
  }
  if (rep.total == 0) rep.worst_excess = 0.0;
  return rep;
}

}  // namespace sqmf
