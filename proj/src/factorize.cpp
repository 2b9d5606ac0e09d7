#include "sqmf/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sqmf/rng.hpp"

namespace sqmf {

namespace {

MatrixXd uniform_h0(const QuaternionMatrix& m, int r) {
  return MatrixXd::Constant(r, m.cols(), 1.0 / static_cast<double>(r));
}

Factorization selection_pipeline(const QuaternionMatrix& m, int r,
                                 const NnlsOptions& opts,
                                 SelectionResult sel, Method method) {
  Factorization fac;
  fac.method = method;
  fac.w = m.select_columns(sel.indices);
  MatrixXd h0;
  try {
    h0 = qnls(m, fac.w);
  } catch (const SingularityError&) {
    // known failure mode of the one-shot solver; the sweeps recover from a
    // flat start
    h0 = uniform_h0(m, r);
  }
  auto [h, trace] = qhnls(m, fac.w, h0, opts);
  fac.h = std::move(h);
  fac.trace = std::move(trace);
  fac.selection = std::move(sel);
  return fac;
}

// Planewise least-squares W update: W_l = S_l(M) H' (H H')^-1, computed as a
// rank-revealing least-norm solve so near-dependent rows of H (e.g. rows the
// xi floor pinned to a constant) do not abort the restart.
QuaternionMatrix solve_w(const QuaternionMatrix& m, const MatrixXd& h) {
  const Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(h.transpose());
  QuaternionMatrix w(m.rows(), h.rows());
  for (int l = 0; l < 4; ++l)
    w.component(l) = cod.solve(m.component(l).transpose()).transpose();
  return w;
}

QuaternionMatrix random_column_init(const QuaternionMatrix& m, int r,
                                    CounterRng& rng) {
  std::vector<int> cols(static_cast<std::size_t>(m.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  for (std::size_t i = cols.size() - 1; i > 0; --i)
    std::swap(cols[i], cols[rng.below(i + 1)]);
  cols.resize(static_cast<std::size_t>(r));
  return project_hs(m.select_columns(cols));
}

// Remove the per-source scale ambiguity: without this, the H_S projection
// and the exact H-step drift the column scales apart until the normal
// matrix is numerically singular. Rescaling leaves W H (and the objective)
// unchanged and H_S is scale-invariant.
void normalize_scales(QuaternionMatrix& w, MatrixXd& h) {
  for (Index i = 0; i < w.cols(); ++i) {
    double s2 = 0.0;
    for (int l = 0; l < 4; ++l) s2 += w.component(l).col(i).squaredNorm();
    const double s = std::sqrt(s2);
    if (s <= 0.0) continue;
    for (int l = 0; l < 4; ++l) w.component(l).col(i) /= s;
    h.row(i) *= s;
  }
}

MatrixXd random_h_init(int r, Index n, CounterRng& rng) {
  MatrixXd h(r, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < r; ++i)
      h(i, j) = rng.uniform_open_closed(0.0, 1.0);
  return h;
}

// Shared restart driver for qnmf / imqnmf; the H-step is the only
// difference between the two.
template <typename HStep>
Factorization restarted_anls(const QuaternionMatrix& m, const QnmfOptions& opts,
                             Method method, HStep h_step) {
  if (opts.restarts < 1) throw DomainError("qnmf: restarts must be >= 1");
  if (opts.rank < 1 || opts.rank > std::min(m.rows(), m.cols()))
    throw DomainError("qnmf: rank outside [1, min(m, n)]");

  Factorization best;
  bool have_best = false;
  double best_obj = 0.0;
  int failures = 0;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    CounterRng rng(opts.seed, 1000 + static_cast<std::uint64_t>(restart));
    try {
      QuaternionMatrix w;
      MatrixXd h;
      if (restart == 0 && opts.init_h) {
        if (opts.init_h->rows() != opts.rank || opts.init_h->cols() != m.cols())
          throw DimensionError("qnmf: init_h shape mismatch");
        h = *opts.init_h;
        w = project_hs(solve_w(m, h));
      } else {
        w = random_column_init(m, opts.rank, rng);
        h = random_h_init(opts.rank, m.cols(), rng);
      }

      ConvergenceTrace trace;
      double delta_denom = 0.0;
      // keep the best iterate of the restart: the H_S projection half-step is
      // not a descent step, so the last iterate can be worse than an earlier
      // one
      QuaternionMatrix w_best = w;
      MatrixXd h_best = h;
      double obj = objective(m, w, h);
      for (int k = 0; k < opts.nnls.max_iter; ++k) {
        const MatrixXd h_prev = h;
        h = h_step(m, w, h);
        trace.objective.push_back(objective(m, w, h));

        QuaternionMatrix w_free = solve_w(m, h);
        trace.objective.push_back(objective(m, w_free, h));  // pre-projection
        w = project_hs(w_free);
        const double obj_k = objective(m, w, h);
        trace.objective.push_back(obj_k);  // post-projection
        ++trace.sweeps;
        if (obj_k < obj) {
          obj = obj_k;
          w_best = w;
          h_best = h;
        }

        const double change = (h - h_prev).norm();
        if (k == 0) delta_denom = change;
        const double delta = delta_denom > 0.0 ? change / delta_denom : 0.0;
        trace.delta.push_back(delta);
        normalize_scales(w, h);
        if (delta_denom == 0.0 || delta < opts.nnls.eps0) break;
      }
      w = std::move(w_best);
      h = std::move(h_best);
      if (!have_best || obj < best_obj) {
        best_obj = obj;
        best.w = std::move(w);
        best.h = std::move(h);
        best.trace = std::move(trace);
        have_best = true;
      }
    } catch (const SingularityError&) {
      ++failures;
    } catch (const ZeroSourceError&) {
      ++failures;
    }
  }

  if (!have_best)
    throw ConvergenceError(failures, method_name(method) + ": all " +
                                         std::to_string(failures) +
                                         " restarts failed");
  best.method = method;
  best.trace.failed_restarts = failures;
  return best;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kSqmf: return "sqmf";
    case Method::kSpaStar: return "spa-star";
    case Method::kQnmf: return "qnmf";
    default: return "imqnmf";
  }
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "sqmf") return Method::kSqmf;
  if (name == "spa-star" || name == "spa_star") return Method::kSpaStar;
  if (name == "qnmf") return Method::kQnmf;
  if (name == "imqnmf") return Method::kImQnmf;
  return std::nullopt;
}

Factorization sqmf(const QuaternionMatrix& m, int r, const NnlsOptions& opts) {
  return selection_pipeline(m, r, opts, qspa(m, r), Method::kSqmf);
}

Factorization spa_star(const QuaternionMatrix& m, int r,
                       const NnlsOptions& opts, DegeneratePolicy policy) {
  return selection_pipeline(m, r, opts, spa_real(m.component(0), r, policy),
                            Method::kSpaStar);
}

Factorization qnmf(const QuaternionMatrix& m, const QnmfOptions& opts) {
  return restarted_anls(m, opts, Method::kQnmf,
                        [](const QuaternionMatrix& mm, const QuaternionMatrix& w,
                           const MatrixXd&) { return qnls(mm, w); });
}

Factorization imqnmf(const QuaternionMatrix& m, const QnmfOptions& opts) {
  NnlsOptions inner = opts.nnls;
  inner.max_iter = std::max(1, opts.inner_sweeps);
  inner.record_trace = false;
  return restarted_anls(
      m, opts, Method::kImQnmf,
      [inner](const QuaternionMatrix& mm, const QuaternionMatrix& w,
              const MatrixXd& h) { return qhnls(mm, w, h, inner).first; });
}

QuaternionMatrix project_hs(const QuaternionMatrix& w) {
  QuaternionMatrix out = w;
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) {
      double s0 = std::max(0.0, out.component(0)(i, j));
      double s1 = out.component(1)(i, j);
      double s2 = out.component(2)(i, j);
      double s3 = out.component(3)(i, j);
      double im2 = s1 * s1 + s2 * s2 + s3 * s3;
      if (im2 > s0 * s0) {
        double scale = s0 > 0.0 ? s0 / std::sqrt(im2) : 0.0;
        // shave off rounding so the scaled triple never lands above the cone
        while (true) {
          const double t1 = s1 * scale, t2 = s2 * scale, t3 = s3 * scale;
          if (t1 * t1 + t2 * t2 + t3 * t3 <= s0 * s0) {
            s1 = t1;
            s2 = t2;
            s3 = t3;
            break;
          }
          scale *= 0.99999999999999989;  // one ulp down
        }
      }
      out.component(0)(i, j) = s0;
      out.component(1)(i, j) = s1;
      out.component(2)(i, j) = s2;
      out.component(3)(i, j) = s3;
    }
  }
  return out;
}

}  // namespace sqmf
