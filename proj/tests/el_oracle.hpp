#pragma once

// Primal maximizer of sum log p_i over {p > 0, sum p = 1, sum p e = 0} by compass
// search on a refining lattice inside the feasible affine subspace. Shares no
// code with the dual Newton solver.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline double log_likelihood(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) > 0.0)) return -INFINITY;
    s += std::log(p(i));
  }
  return s;
}

/// Strictly positive feasible starting point.
inline Eigen::VectorXd feasible_start(const std::vector<double>& e) {
  const int n = static_cast<int>(e.size());
  const auto imin = static_cast<int>(std::min_element(e.begin(), e.end()) - e.begin());
  const auto imax = static_cast<int>(std::max_element(e.begin(), e.end()) - e.begin());
  const double lo = e[imin], hi = e[imax];
  Eigen::VectorXd two = Eigen::VectorXd::Zero(n);
  two(imin) = hi / (hi - lo);
  two(imax) = -lo / (hi - lo);
  for (double beta = 0.5; beta > 1e-9; beta *= 0.5) {
    Eigen::VectorXd p = Eigen::VectorXd::Constant(n, beta / n) + (1.0 - beta) * two;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += p(i) * e[i];
    // shift mass between the extreme points to cancel the mean
    const double delta = mean / (hi - lo);
    p(imax) -= delta;
    p(imin) += delta;
    if ((p.array() > 0.0).all()) return p;
  }
  return two;
}

inline Eigen::VectorXd el_pattern_search(const std::vector<double>& e) {
  const int n = static_cast<int>(e.size());
  Eigen::MatrixXd a(2, n);
  for (int i = 0; i < n; ++i) {
    a(0, i) = 1.0;
    a(1, i) = e[i];
  }
  // orthonormal basis of the null space of the constraint matrix
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::MatrixXd basis = svd.matrixV().rightCols(n - 2);
  Eigen::VectorXd p = feasible_start(e);
  if (n == 2) return p;
  double best = log_likelihood(p);
  for (double step = 0.05; step > 1e-11; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int k = 0; k < basis.cols(); ++k) {
        for (double sign : {1.0, -1.0}) {
          const Eigen::VectorXd cand = p + sign * step * basis.col(k);
          const double v = log_likelihood(cand);
          if (v > best) {
            best = v;
            p = cand;
            improved = true;
          }
        }
      }
    }
  }
  return p;
}

}  // namespace oracle
