#include "sqmf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sqmf/rng.hpp"
#include "sqmf/stokes.hpp"

namespace sqmf {

namespace {

// rng stream ids per ingredient, so adding one does not shift the others
enum Stream : std::uint64_t {
  kBaseStream = 0,
  kAngleStream = 1,
  kMixStream = 2,
  kPermStream = 3,
  kNoiseStream = 4,
};

constexpr double kRankTolRel = 1e-8;
constexpr int kAngleResamples = 10;

std::vector<double> draw_angles(CounterRng& rng, int r) {
  std::vector<double> a(static_cast<std::size_t>(r));
  constexpr double pi = 3.141592653589793238462643383279;
  for (auto& v : a) v = (2.0 * rng.uniform() - 1.0) * pi;
  return a;
}

bool full_stacked_rank(const QuaternionMatrix& w) {
  Eigen::JacobiSVD<MatrixXd> svd(mat_stack(w));
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > kRankTolRel * s[0];
}

// Builds W* (angles resampled until the plane stack has full column rank),
// H* = [I_r, U] Pi, and the noisy observation.
SynthBundle assemble_bundle(const MatrixXd& s0cols, const SynthConfig& cfg) {
  const int r = static_cast<int>(s0cols.cols());
  const int n = cfg.n;
  if (n < r) throw GenerationError("synth: n < r");

  SynthBundle bundle;
  bundle.config = cfg;

  CounterRng angle_rng(cfg.seed, kAngleStream);
  std::vector<double> alpha = cfg.alpha;
  std::vector<double> beta = cfg.beta;
  const bool angles_given = !alpha.empty();
  if (angles_given &&
      (alpha.size() != static_cast<std::size_t>(r) || beta.size() != alpha.size()))
    throw GenerationError("synth: alpha/beta length must equal r");

  // H* = [I_r, U] Pi
  CounterRng mix_rng(cfg.seed, kMixStream);
  MatrixXd block(r, n);
  block.leftCols(r) = MatrixXd::Identity(r, r);
  for (int j = r; j < n; ++j) {
    double sum = 0.0;
    for (int i = 0; i < r; ++i) {
      block(i, j) = mix_rng.uniform();
      sum += block(i, j);
    }
    if (cfg.normalize_mixtures && sum > 1.0) block.col(j) /= sum;
  }

  CounterRng perm_rng(cfg.seed, kPermStream);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[perm_rng.below(static_cast<std::uint64_t>(i) + 1)]);

  bundle.h_star = MatrixXd::Zero(r, n);
  for (int t = 0; t < n; ++t) bundle.h_star.col(perm[static_cast<std::size_t>(t)]) = block.col(t);
  bundle.k_star.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) bundle.k_star[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];

  // draw angles until the plane stack has full column rank and the clean
  // product lies in the constraint set at zero tolerance (mixtures stay in
  // the cone mathematically, but rounding needs to be checked)
  bool ok = false;
  for (int attempt = 0; attempt < kAngleResamples; ++attempt) {
    if (!angles_given || attempt > 0) {
      alpha = draw_angles(angle_rng, r);
      beta = draw_angles(angle_rng, r);
    }
    bundle.w_star = gen_polarized_sources(s0cols, cfg.phi, alpha, beta);
    if (!full_stacked_rank(bundle.w_star)) continue;
    bundle.clean = mul_real(bundle.w_star, bundle.h_star);
    if (validate_matrix(bundle.clean, 0.0).ok()) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw GenerationError(
        "synth: could not draw a full-rank, constraint-satisfying source "
        "matrix after resampling angles");
  bundle.config.alpha = alpha;
  bundle.config.beta = beta;

  bundle.observed = add_noise(bundle.clean, cfg.eps, cfg.seed);
  return bundle;
}

}  // namespace

QuaternionMatrix gen_polarized_sources(const MatrixXd& s0base, double phi,
                                       const std::vector<double>& alpha,
                                       const std::vector<double>& beta) {
  const Index r = s0base.cols();
  if (alpha.size() != static_cast<std::size_t>(r) || beta.size() != alpha.size())
    throw DimensionError("gen_polarized_sources: angle vectors must have length r");
  if ((s0base.array() < 0.0).any())
    throw DomainError("gen_polarized_sources: intensity base must be nonnegative");

  QuaternionMatrix w(s0base.rows(), r);
  w.component(0) = s0base;
  for (Index i = 0; i < r; ++i) {
    const double ca = std::cos(alpha[static_cast<std::size_t>(i)]);
    const double sa = std::sin(alpha[static_cast<std::size_t>(i)]);
    const double cb = std::cos(beta[static_cast<std::size_t>(i)]);
    const double sb = std::sin(beta[static_cast<std::size_t>(i)]);
    w.component(1).col(i) = phi * ca * cb * s0base.col(i);
    w.component(2).col(i) = phi * sa * cb * s0base.col(i);
    w.component(3).col(i) = phi * sb * s0base.col(i);
    // fully polarized entries land exactly on the cone boundary, where
    // rounding in later products (scalar multiples, mixtures) can escape the
    // constraint set; pull each entry a hair inside so every downstream
    // combination stays valid at zero tolerance
    constexpr double kMargin = 1e-13;
    for (Index k = 0; k < s0base.rows(); ++k) {
      const double s0 = w.component(0)(k, i);
      double s1 = w.component(1)(k, i);
      double s2 = w.component(2)(k, i);
      double s3 = w.component(3)(k, i);
      const double cap = s0 * s0 * (1.0 - kMargin);
      double im2 = s1 * s1 + s2 * s2 + s3 * s3;
      if (im2 > cap && im2 > 0.0) {
        const double scale = std::sqrt(cap / im2);
        s1 *= scale;
        s2 *= scale;
        s3 *= scale;
        while (s1 * s1 + s2 * s2 + s3 * s3 > cap) {
          s1 *= 0.99999999999999989;
          s2 *= 0.99999999999999989;
          s3 *= 0.99999999999999989;
        }
      }
      w.component(1)(k, i) = s1;
      w.component(2)(k, i) = s2;
      w.component(3)(k, i) = s3;
    }
  }
  return w;
}

SynthBundle gen_separable(const SynthConfig& cfg) {
  if (cfg.r < 1 || cfg.r > std::min(cfg.m, cfg.n))
    throw GenerationError("gen_separable: need 1 <= r <= min(m, n)");
  CounterRng base_rng(cfg.seed, kBaseStream);
  MatrixXd s0(cfg.m, cfg.r);
  // bounded away from 0 so l1 scales and a_pp diagonals stay conditioned
  for (Index j = 0; j < s0.cols(); ++j)
    for (Index i = 0; i < s0.rows(); ++i)
      s0(i, j) = base_rng.uniform_open_closed(0.1, 1.0);
  return assemble_bundle(s0, cfg);
}

SynthBundle gen_same_intensity(const SynthConfig& cfg) {
  if (cfg.r != 10)
    throw GenerationError("gen_same_intensity: r must be 10");
  if (cfg.n < 10 || cfg.m < 10)
    throw GenerationError("gen_same_intensity: need m, n >= 10");
  CounterRng base_rng(cfg.seed, kBaseStream);
  MatrixXd base(cfg.m, 6);
  for (Index j = 0; j < base.cols(); ++j)
    for (Index i = 0; i < base.rows(); ++i)
      base(i, j) = base_rng.uniform_open_closed(0.1, 1.0);

  // intensity pattern [b0..b5, b0, b0, b2, b3]: rank 6 with repeated columns
  MatrixXd s0(cfg.m, 10);
  s0.leftCols(6) = base;
  s0.col(6) = base.col(0);
  s0.col(7) = base.col(0);
  s0.col(8) = base.col(2);
  s0.col(9) = base.col(3);
  return assemble_bundle(s0, cfg);
}

QuaternionMatrix add_noise(const QuaternionMatrix& m_star, double eps,
                           std::uint64_t seed) {
  if (eps < 0.0) throw DomainError("add_noise: eps must be >= 0");
  if (eps == 0.0) return m_star;

  CounterRng rng(seed, kNoiseStream);
  QuaternionMatrix noise(m_star.rows(), m_star.cols());
  for (int l = 0; l < 4; ++l)
    for (Index j = 0; j < m_star.cols(); ++j)
      for (Index i = 0; i < m_star.rows(); ++i)
        noise.component(l)(i, j) = rng.normal();

  const double scale = eps * m_star.frobenius_norm() / noise.frobenius_norm();
  for (int l = 0; l < 4; ++l) noise.component(l) *= scale;
  return m_star + noise;
}

MatrixXd split_sources(const MatrixXd& h0,
                       const std::vector<SourceSplit>& scheme) {
  int extra = 0;
  for (const auto& split : scheme) {
    if (split.parent < 0 || split.parent >= h0.rows())
      throw SchemeError("split_sources: parent row " +
                        std::to_string(split.parent) + " out of range");
    extra += static_cast<int>(split.carves.size());
  }

  MatrixXd h(h0.rows() + extra, h0.cols());
  h.topRows(h0.rows()) = h0;
  h.bottomRows(extra).setZero();

  int next = static_cast<int>(h0.rows());
  for (const auto& split : scheme) {
    for (const auto& carve : split.carves) {
      if (carve.ones_count + carve.frac_count <= 0)
        throw SchemeError("split_sources: empty carve for parent row " +
                          std::to_string(split.parent));
      int ones_left = carve.ones_count;
      int frac_left = carve.frac_count;
      const Index n = h.cols();
      for (Index step = 0; step < n && (ones_left > 0 || frac_left > 0); ++step) {
        const Index j = carve.from_end ? n - 1 - step : step;
        const double v = h(split.parent, j);
        const bool is_one = v == 1.0;
        const bool is_frac = v > 0.0 && v < 1.0;
        if ((is_one && ones_left > 0) || (is_frac && frac_left > 0)) {
          h(next, j) = v;
          h(split.parent, j) = 0.0;
          (is_one ? ones_left : frac_left) -= 1;
        }
      }
      if (ones_left > 0 || frac_left > 0)
        throw SchemeError(
            "split_sources: parent row " + std::to_string(split.parent) +
            " has too few qualifying positions (missing " +
            std::to_string(ones_left) + " ones, " + std::to_string(frac_left) +
            " fractional)");
      ++next;
    }
  }
  return h;
}

}  // namespace sqmf
