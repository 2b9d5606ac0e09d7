#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sqmf/nnls.hpp"
#include "sqmf/qspa.hpp"

namespace sqmf {

enum class Method { kSqmf, kSpaStar, kQnmf, kImQnmf };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct Factorization {
  QuaternionMatrix w;
  MatrixXd h;
  Method method = Method::kSqmf;
  ConvergenceTrace trace;
  std::optional<SelectionResult> selection;  // present for the selection methods
};

struct QnmfOptions {
  int rank = 1;
  int restarts = 10;
  NnlsOptions nnls;
  std::uint64_t seed = 0;
  int inner_sweeps = 1;  // qhnls sweeps per outer iteration (ImQNMF)
  // When set, restart 0 starts from this H (W solved from it) instead of a
  // random draw; remaining restarts stay random.
  std::optional<MatrixXd> init_h;
};

// Selection by qspa, W = M(:,K), H by qhnls warm-started from qnls (uniform
// 1/r on singularity).
Factorization sqmf(const QuaternionMatrix& m, int r,
                   const NnlsOptions& opts = {});

// Same pipeline with selection by classic SPA on the intensity plane; fails
// with a rank-deficiency error when rank(S0(M)) < r under the strict policy.
Factorization spa_star(const QuaternionMatrix& m, int r,
                       const NnlsOptions& opts = {},
                       DegeneratePolicy policy = DegeneratePolicy::kFillSmallest);

// Alternating least squares baseline: H-step by qnls, W-step by planewise
// unconstrained least squares followed by the H_S projection.  Best restart
// by objective; all-restarts-failed raises ConvergenceError with the count.
Factorization qnmf(const QuaternionMatrix& m, const QnmfOptions& opts);

// qnmf with the H-step replaced by warm-started qhnls sweeps; the xi floor
// removes the zero-row singularity by construction.
Factorization imqnmf(const QuaternionMatrix& m, const QnmfOptions& opts);

// Entrywise Euclidean projection into H_S: clamp the intensity to >= 0, then
// scale the imaginary triple onto the boundary where it exceeds it.
// Idempotent; the output passes validate_matrix with tol 0.
QuaternionMatrix project_hs(const QuaternionMatrix& w);

}  // namespace sqmf
