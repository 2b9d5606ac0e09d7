#pragma once

#include <utility>
#include <vector>

#include "sqmf/quat_core.hpp"

namespace sqmf {

struct NnlsOptions {
  double xi = 1e-12;     // positivity floor for the hierarchical updates
  int max_iter = 1000;
  double eps0 = 1e-4;    // relative-change stopping threshold
  bool record_trace = true;
};

struct ConvergenceTrace {
  std::vector<double> objective;  // ||M - W H||_F^2, initial value then one per sweep
  std::vector<double> delta;      // ||H^(k+1)-H^(k)||_F / ||H^(1)-H^(0)||_F
  int sweeps = 0;
  int failed_restarts = 0;  // used by the restarted factorizations
};

// ||M - W H||_F^2 summed over the four planes.
double objective(const QuaternionMatrix& m, const QuaternionMatrix& w,
                 const MatrixXd& h);

// A = sum_l S_l(W)' S_l(W): the normal-equation block of the stacked-real
// least-squares problem.
MatrixXd normal_matrix(const QuaternionMatrix& w);

// B = sum_l S_l(W)' S_l(M).
MatrixXd cross_matrix(const QuaternionMatrix& w, const QuaternionMatrix& m);

// One-shot projected least squares: the unconstrained solution of the
// stacked normal equations, clamped entrywise to >= 0.  Throws
// SingularityError when A is rank deficient beyond the pivot-ratio
// threshold.
MatrixXd qnls(const QuaternionMatrix& m, const QuaternionMatrix& w);

// Hierarchical (row-wise block coordinate descent) solver with the xi
// floor.  Every entry of the result is >= xi; the objective is nonincreasing
// across sweeps.  Throws ZeroSourceError when some source column of W has
// (numerically) zero norm.
std::pair<MatrixXd, ConvergenceTrace> qhnls(const QuaternionMatrix& m,
                                            const QuaternionMatrix& w,
                                            const MatrixXd& h0,
                                            const NnlsOptions& opts = {});

struct GradientProbe {
  double analytic = 0.0;
  double numeric = 0.0;
};

// Partial derivative of the fit objective in h_pj: the residual-form
// analytic value -2 sum_l S_l(w_p)'(S_l(m_j) - S_l(W) h_j) against a central
// finite difference.  (The leading minus makes the analytic value agree with
// finite differences of the objective.)
GradientProbe gradient_check(const QuaternionMatrix& m,
                             const QuaternionMatrix& w, const MatrixXd& h,
                             int p, int j);

}  // namespace sqmf
