#include "sqmf/qspa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqmf {

namespace {

constexpr double kDeadzoneRel = 1e-12;
constexpr double kResidualFloorRel = 1e-10;

// Selection/projection loop on an already-normalized real matrix.  qspa runs
// it on the 4m x n plane stack, spa_real on the intensity plane directly.
SelectionResult spa_core(MatrixXd z, int r, const std::vector<int>& skipped,
                         DegeneratePolicy policy) {
  const Index n = z.cols();
  if (r < 1 || r > n)
    throw RankDeficiencyError(0, "spa: r = " + std::to_string(r) +
                                     " outside [1, " + std::to_string(n) + "]");

  std::vector<char> usable(static_cast<std::size_t>(n), 1);
  for (int j : skipped) usable[static_cast<std::size_t>(j)] = 0;
  const long usable_count =
      std::count(usable.begin(), usable.end(), static_cast<char>(1));
  if (usable_count < r)
    throw RankDeficiencyError(
        0, "spa: only " + std::to_string(usable_count) +
               " usable columns for r = " + std::to_string(r));

  SelectionResult result;
  result.skipped = skipped;
  std::vector<char> selected(static_cast<std::size_t>(n), 0);

  VectorXd sq = z.colwise().squaredNorm();
  double initial_max = 0.0;
  for (Index j = 0; j < n; ++j)
    if (usable[static_cast<std::size_t>(j)]) initial_max = std::max(initial_max, sq[j]);
  const double floor_norm = kResidualFloorRel * std::sqrt(initial_max);

  for (int step = 0; step < r; ++step) {
    int k = -1;
    double best = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (!usable[static_cast<std::size_t>(j)] || selected[static_cast<std::size_t>(j)])
        continue;
      if (sq[j] > best) {  // ties resolved to the smallest index
        best = sq[j];
        k = static_cast<int>(j);
      }
    }
    if (std::sqrt(best) <= floor_norm) {
      if (policy == DegeneratePolicy::kThrow)
        throw RankDeficiencyError(
            step, "spa: residual collapsed at step " + std::to_string(step) +
                      " of " + std::to_string(r) + " (numerical rank < r)");
      // Residuals are below noise; fall back to the smallest unselected
      // usable index so reruns are deterministic.
      for (Index j = 0; j < n; ++j) {
        if (usable[static_cast<std::size_t>(j)] &&
            !selected[static_cast<std::size_t>(j)]) {
          k = static_cast<int>(j);
          best = sq[j];
          break;
        }
      }
      if (result.degenerate_from < 0) result.degenerate_from = step;
    }
    result.indices.push_back(k);
    result.step_norms.push_back(std::sqrt(std::max(best, 0.0)));
    selected[static_cast<std::size_t>(k)] = 1;

    if (result.degenerate_from >= 0) continue;  // nothing left to project out

    const VectorXd zk = z.col(k);
    const VectorXd p = z.transpose() * zk;
    z.noalias() -= zk * (p.transpose() / sq[k]);
    sq = z.colwise().squaredNorm();
  }
  return result;
}

}  // namespace

NormalizeResult normalize_columns(const QuaternionMatrix& m) {
  NormalizeResult out;
  out.matrix = m;
  const Index n = m.cols();
  out.scales = VectorXd::Zero(n);
  double max_l1 = 0.0;
  for (Index j = 0; j < n; ++j) {
    out.scales[j] = m.component(0).col(j).lpNorm<1>();
    max_l1 = std::max(max_l1, out.scales[j]);
  }
  const double deadzone = kDeadzoneRel * max_l1;
  for (Index j = 0; j < n; ++j) {
    if (out.scales[j] <= deadzone) {
      out.skipped.push_back(static_cast<int>(j));
      continue;
    }
    for (int l = 0; l < 4; ++l)
      out.matrix.component(l).col(j) /= out.scales[j];
  }
  return out;
}

SelectionResult qspa(const QuaternionMatrix& m, int r,
                     DegeneratePolicy policy) {
  NormalizeResult norm = normalize_columns(m);
  return spa_core(mat_stack(norm.matrix), r, norm.skipped, policy);
}

SelectionResult spa_real(const MatrixXd& x, int r, DegeneratePolicy policy) {
  MatrixXd z = x;
  const Index n = z.cols();
  std::vector<int> skipped;
  double max_l1 = 0.0;
  VectorXd scales(n);
  for (Index j = 0; j < n; ++j) {
    scales[j] = z.col(j).lpNorm<1>();
    max_l1 = std::max(max_l1, scales[j]);
  }
  const double deadzone = kDeadzoneRel * max_l1;
  for (Index j = 0; j < n; ++j) {
    if (scales[j] <= deadzone)
      skipped.push_back(static_cast<int>(j));
    else
      z.col(j) /= scales[j];
  }
  return spa_core(std::move(z), r, skipped, policy);
}

}  // namespace sqmf
