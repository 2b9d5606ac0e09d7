#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqmf/quat_core.hpp"

namespace sqmf {

// One row of the evaluation tables.  Percent measures; the optional fields
// are absent when ground truth was not supplied or a component plane is
// identically zero.
struct EvalReport {
  std::string method;
  double appro = 0.0;
  std::array<std::optional<double>, 4> app_s;
  std::optional<double> app_w;
  std::optional<double> app_h;
  std::optional<double> accuracy;
  double wall_time_s = 0.0;

  // Column order follows the evaluation tables:
  // method, appro, app-s0..s3, appW, appH, accuracy, time.
  static std::string csv_header();
  std::string csv_row() const;
  std::string to_json() const;
};

// 100 - 100 ||M - W H||_F / ||M||_F.
double appro(const QuaternionMatrix& m, const QuaternionMatrix& w,
             const MatrixXd& h);

// Same measure restricted to plane l; nullopt when ||S_l(M)||_F = 0
// (e.g. data with no circular polarization).
std::optional<double> appro_component(const QuaternionMatrix& m,
                                      const QuaternionMatrix& w,
                                      const MatrixXd& h, int l);

// 100 - 100 min_pi ||W* - W(:,pi)||_F / ||W*||_F over column permutations.
// Exhaustive for r <= 8, otherwise optimal assignment on the pairwise
// squared-distance cost matrix (which minimizes the same objective, since
// the Frobenius cost is separable across matched pairs).
double app_w(const QuaternionMatrix& w_star, const QuaternionMatrix& w);

// Row-permutation analogue for the activation matrix.
double app_h(const MatrixXd& h_star, const MatrixXd& h);

// Both measures under one shared permutation (chosen to minimize the summed
// squared distance); app_w/app_h above optimize their permutations
// independently.
std::pair<double, double> app_wh(const QuaternionMatrix& w_star,
                                 const QuaternionMatrix& w,
                                 const MatrixXd& h_star, const MatrixXd& h);

// |K* intersect K| / |K*|.
double accuracy(const std::vector<int>& k_star, const std::vector<int>& k);

}  // namespace sqmf
