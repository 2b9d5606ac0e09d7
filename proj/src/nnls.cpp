#include "sqmf/nnls.hpp"

#include <cmath>
#include <string>

namespace sqmf {

namespace {
constexpr double kPivotRatioMax = 1e12;
}

double objective(const QuaternionMatrix& m, const QuaternionMatrix& w,
                 const MatrixXd& h) {
  if (w.cols() != h.rows() || m.rows() != w.rows() || m.cols() != h.cols())
    throw DimensionError("objective: dimensions do not conform");
  double s = 0.0;
  for (int l = 0; l < 4; ++l)
    s += (m.component(l) - w.component(l) * h).squaredNorm();
  return s;
}

MatrixXd normal_matrix(const QuaternionMatrix& w) {
  MatrixXd a = MatrixXd::Zero(w.cols(), w.cols());
  for (int l = 0; l < 4; ++l)
    a.noalias() += w.component(l).transpose() * w.component(l);
  return a;
}

MatrixXd cross_matrix(const QuaternionMatrix& w, const QuaternionMatrix& m) {
  if (w.rows() != m.rows())
    throw DimensionError("cross_matrix: row counts differ");
  MatrixXd b = MatrixXd::Zero(w.cols(), m.cols());
  for (int l = 0; l < 4; ++l)
    b.noalias() += w.component(l).transpose() * m.component(l);
  return b;
}

MatrixXd qnls(const QuaternionMatrix& m, const QuaternionMatrix& w) {
  const MatrixXd a = normal_matrix(w);
  const MatrixXd b = cross_matrix(w, m);

  Eigen::LDLT<MatrixXd> ldlt(a);
  const VectorXd d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  if (ldlt.info() != Eigen::Success || dmin <= 0.0 ||
      dmax / dmin > kPivotRatioMax)
    throw SingularityError("qnls: normal matrix is singular (pivot ratio)");

  return ldlt.solve(b).cwiseMax(0.0);
}

std::pair<MatrixXd, ConvergenceTrace> qhnls(const QuaternionMatrix& m,
                                            const QuaternionMatrix& w,
                                            const MatrixXd& h0,
                                            const NnlsOptions& opts) {
  const Index r = w.cols();
  const Index n = m.cols();
  if (h0.rows() != r || h0.cols() != n || m.rows() != w.rows())
    throw DimensionError("qhnls: dimensions do not conform");
  if (opts.xi <= 0.0 || opts.max_iter < 1 || opts.eps0 <= 0.0)
    throw DomainError("qhnls: invalid options");

  const MatrixXd a = normal_matrix(w);
  const MatrixXd b = cross_matrix(w, m);
  const double app_tol = 1e-12 * a.diagonal().maxCoeff();
  for (Index p = 0; p < r; ++p) {
    if (a(p, p) <= app_tol)
      throw ZeroSourceError(static_cast<int>(p),
                            "qhnls: source column " + std::to_string(p) +
                                " has zero norm");
  }

  MatrixXd h = h0;
  ConvergenceTrace trace;
  if (opts.record_trace) trace.objective.push_back(objective(m, w, h));

  double delta_denom = 0.0;
  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    const MatrixXd h_prev = h;
    for (Index p = 0; p < r; ++p) {
      // Gauss-Seidel: rows above p already hold their new values.
      Eigen::RowVectorXd c = a.row(p) * h;
      c -= a(p, p) * h.row(p);
      h.row(p) = ((b.row(p) - c) / a(p, p)).cwiseMax(opts.xi);
    }
    ++trace.sweeps;

    const double change = (h - h_prev).norm();
    if (sweep == 0) delta_denom = change;
    const double delta = delta_denom > 0.0 ? change / delta_denom : 0.0;
    if (opts.record_trace) {
      trace.objective.push_back(objective(m, w, h));
      trace.delta.push_back(delta);
    }
    if (delta_denom == 0.0 || delta < opts.eps0) break;
  }
  return {std::move(h), std::move(trace)};
}

GradientProbe gradient_check(const QuaternionMatrix& m,
                             const QuaternionMatrix& w, const MatrixXd& h,
                             int p, int j) {
  GradientProbe probe;
  double analytic = 0.0;
  for (int l = 0; l < 4; ++l) {
    const VectorXd residual =
        m.component(l).col(j) - w.component(l) * h.col(j);
    analytic += w.component(l).col(p).dot(residual);
  }
  probe.analytic = -2.0 * analytic;

  const double step = 1e-6 * (1.0 + std::abs(h(p, j)));
  MatrixXd hp = h;
  hp(p, j) = h(p, j) + step;
  MatrixXd hm = h;
  hm(p, j) = h(p, j) - step;
  probe.numeric = (objective(m, w, hp) - objective(m, w, hm)) / (2.0 * step);
  return probe;
}

}  // namespace sqmf
