#include "sqmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sqmf {

namespace {

// Minimum-cost assignment: perm[i] = matched column of row i.
// Exhaustive for small sizes, Hungarian (potentials form) above that.
std::vector<int> min_assignment(const MatrixXd& cost) {
  const int r = static_cast<int>(cost.rows());
  std::vector<int> best(static_cast<std::size_t>(r));

  if (r <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    double best_total = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int i = 0; i < r; ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
      if (total < best_total) {
        best_total = total;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  // Hungarian algorithm with row/column potentials, O(r^3).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(r) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(r) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(r) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(r) + 1, 0);
  for (int i = 1; i <= r; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(r) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(r) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= r; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= r; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= r; ++j)
    best[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
  return best;
}

MatrixXd column_cost(const QuaternionMatrix& w_star, const QuaternionMatrix& w) {
  const Index r = w_star.cols();
  MatrixXd cost = MatrixXd::Zero(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      for (int l = 0; l < 4; ++l)
        cost(i, j) +=
            (w_star.component(l).col(i) - w.component(l).col(j)).squaredNorm();
  return cost;
}

MatrixXd row_cost(const MatrixXd& h_star, const MatrixXd& h) {
  const Index r = h_star.rows();
  MatrixXd cost(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      cost(i, j) = (h_star.row(i) - h.row(j)).squaredNorm();
  return cost;
}

double percent_from_cost(double total_sq, double ref_norm) {
  return 100.0 - 100.0 * std::sqrt(std::max(total_sq, 0.0)) / ref_norm;
}

double assignment_total(const MatrixXd& cost, const std::vector<int>& perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    total += cost(static_cast<Index>(i), perm[i]);
  return total;
}

std::string fmt6(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt6_opt(const std::optional<double>& v) {
  return v ? fmt6(*v) : "n/a";
}

}  // namespace

double appro(const QuaternionMatrix& m, const QuaternionMatrix& w,
             const MatrixXd& h) {
  const double ref = m.frobenius_norm();
  if (ref == 0.0) throw DomainError("appro: ||M||_F is zero");
  const QuaternionMatrix diff = m - mul_real(w, h);
  return 100.0 - 100.0 * diff.frobenius_norm() / ref;
}

std::optional<double> appro_component(const QuaternionMatrix& m,
                                      const QuaternionMatrix& w,
                                      const MatrixXd& h, int l) {
  const double ref = m.component(l).norm();
  if (ref == 0.0) return std::nullopt;
  const double res = (m.component(l) - w.component(l) * h).norm();
  return 100.0 - 100.0 * res / ref;
}

double app_w(const QuaternionMatrix& w_star, const QuaternionMatrix& w) {
  if (w_star.cols() != w.cols() || w_star.rows() != w.rows())
    throw DimensionError("app_w: shapes differ");
  const double ref = w_star.frobenius_norm();
  if (ref == 0.0) throw DomainError("app_w: ||W*||_F is zero");
  const MatrixXd cost = column_cost(w_star, w);
  return percent_from_cost(assignment_total(cost, min_assignment(cost)), ref);
}

double app_h(const MatrixXd& h_star, const MatrixXd& h) {
  if (h_star.rows() != h.rows() || h_star.cols() != h.cols())
    throw DimensionError("app_h: shapes differ");
  const double ref = h_star.norm();
  if (ref == 0.0) throw DomainError("app_h: ||H*||_F is zero");
  const MatrixXd cost = row_cost(h_star, h);
  return percent_from_cost(assignment_total(cost, min_assignment(cost)), ref);
}

std::pair<double, double> app_wh(const QuaternionMatrix& w_star,
                                 const QuaternionMatrix& w,
                                 const MatrixXd& h_star, const MatrixXd& h) {
  const MatrixXd cw = column_cost(w_star, w);
  const MatrixXd ch = row_cost(h_star, h);
  const std::vector<int> perm = min_assignment(cw + ch);
  return {percent_from_cost(assignment_total(cw, perm), w_star.frobenius_norm()),
          percent_from_cost(assignment_total(ch, perm), h_star.norm())};
}

double accuracy(const std::vector<int>& k_star, const std::vector<int>& k) {
  if (k_star.empty()) throw DomainError("accuracy: K* is empty");
  const std::set<int> truth(k_star.begin(), k_star.end());
  const std::set<int> got(k.begin(), k.end());
  long hits = 0;
  for (int idx : got) hits += truth.count(idx);
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string EvalReport::csv_header() {
  return "method,appro,app_s0,app_s1,app_s2,app_s3,appW,appH,accuracy,time_s";
}

std::string EvalReport::csv_row() const {
  std::ostringstream os;
  os << method << ',' << fmt6(appro) << ',' << fmt6_opt(app_s[0]) << ','
     << fmt6_opt(app_s[1]) << ',' << fmt6_opt(app_s[2]) << ','
     << fmt6_opt(app_s[3]) << ',' << fmt6_opt(app_w) << ','
     << fmt6_opt(app_h) << ',' << fmt6_opt(accuracy) << ','
     << fmt6(wall_time_s);
  return os.str();
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["method"] = method;
  j["appro"] = appro;
  const char* keys[4] = {"app_s0", "app_s1", "app_s2", "app_s3"};
  for (int l = 0; l < 4; ++l) {
    if (app_s[l]) j[keys[l]] = *app_s[l];
    else j[keys[l]] = nullptr;
  }
  j["appW"] = app_w ? nlohmann::json(*app_w) : nlohmann::json(nullptr);
  j["appH"] = app_h ? nlohmann::json(*app_h) : nlohmann::json(nullptr);
  j["accuracy"] = accuracy ? nlohmann::json(*accuracy) : nlohmann::json(nullptr);
  j["time_s"] = wall_time_s;
  return j.dump(2);
}

}  // namespace sqmf
