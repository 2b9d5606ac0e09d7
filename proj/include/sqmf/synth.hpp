#pragma once

#include <cstdint>
#include <vector>

#include "sqmf/quat_core.hpp"

namespace sqmf {

struct SynthConfig {
  int m = 30;          // spectral bands
  int n = 100;         // pixels
  int r = 5;           // sources
  double phi = 1.0;    // degree of polarization
  double eps = 0.0;    // noise level ||N||_F / ||M*||_F
  std::uint64_t seed = 0;
  std::vector<double> alpha;  // per-source polarization angles; drawn when empty
  std::vector<double> beta;
  // Scale the mixed columns of H* to l1 sum <= 1.  Disable to exercise the
  // normalization path in the selection algorithms.
  bool normalize_mixtures = true;
};

struct SynthBundle {
  QuaternionMatrix observed;   // M = M* + N
  QuaternionMatrix clean;      // M* = W* H*
  QuaternionMatrix w_star;
  MatrixXd h_star;
  std::vector<int> k_star;     // planted column indices, in source order
  SynthConfig config;
};

// Per source column i: S1 = phi S0 cos(a_i) cos(b_i), S2 = phi S0 sin(a_i)
// cos(b_i), S3 = phi S0 sin(b_i).  The output is in H_S exactly.
QuaternionMatrix gen_polarized_sources(const MatrixXd& s0base, double phi,
                                       const std::vector<double>& alpha,
                                       const std::vector<double>& beta);

// Deterministic separable bundle: S0 base uniform on (0.1, 1], H* = [I_r, U] Pi
// with a seeded permutation, full stacked rank enforced by resampling angles.
SynthBundle gen_separable(const SynthConfig& cfg);

// Ten-source variant where the intensity plane has repeated columns (rank 6)
// but every source carries distinct polarization angles; cfg.r must be 10.
SynthBundle gen_same_intensity(const SynthConfig& cfg);

// Adds seeded four-plane Gaussian noise scaled so the measured noise level
// equals eps exactly.  eps = 0 returns the input unchanged.
QuaternionMatrix add_noise(const QuaternionMatrix& m_star, double eps,
                           std::uint64_t seed);

// One new row carved out of a parent abundance row: take ones_count
// positions with value exactly 1 and frac_count positions with value
// strictly in (0, 1), scanning from the end or from the start.
struct SourceCarve {
  int ones_count = 0;
  int frac_count = 0;
  bool from_end = true;
};

struct SourceSplit {
  int parent = 0;
  std::vector<SourceCarve> carves;
};

// Splits abundance rows so the carved siblings plus the reduced parent sum
// back to the original row exactly.  New rows are appended in scheme order.
MatrixXd split_sources(const MatrixXd& h0,
                       const std::vector<SourceSplit>& scheme);

}  // namespace sqmf
