#pragma once

#include <vector>

#include "sqmf/quat_core.hpp"

namespace sqmf {

// What to do when the projected residual collapses to numerical zero before
// r columns have been selected (numerical rank < r).  kFillSmallest keeps
// going deterministically by taking the smallest unselected usable index at
// each remaining step; kThrow raises RankDeficiencyError naming the step.
enum class DegeneratePolicy { kFillSmallest, kThrow };

struct SelectionResult {
  std::vector<int> indices;      // ordered, distinct, in [0, n)
  std::vector<double> step_norms;  // max residual norm achieved per step
  std::vector<int> skipped;      // columns excluded by degenerate normalization
  int degenerate_from = -1;      // first step filled below the residual floor
};

struct NormalizeResult {
  QuaternionMatrix matrix;
  VectorXd scales;            // the intensity l1 denominators, per column
  std::vector<int> skipped;   // columns whose denominator fell in the deadzone
};

// Column-wise division by the intensity l1 norm ||S0(m_j)||_1.  Columns whose
// denominator is within the deadzone (1e-12 of the max) are left untouched
// and reported in skipped.
NormalizeResult normalize_columns(const QuaternionMatrix& m);

// Greedy max-norm selection with orthogonal-complement projection on the
// full quaternion data.  The input is never mutated.
SelectionResult qspa(const QuaternionMatrix& m, int r,
                     DegeneratePolicy policy = DegeneratePolicy::kFillSmallest);

// Classic SPA on a real (intensity) matrix, same selection/projection loop
// with real inner products and l1 column normalization.
SelectionResult spa_real(const MatrixXd& x, int r,
                         DegeneratePolicy policy = DegeneratePolicy::kFillSmallest);

}  // namespace sqmf
