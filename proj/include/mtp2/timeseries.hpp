#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtp2 {

/// Row i of the result is log P_i - log P_{i-1}. Nonpositive prices are a
/// hard error naming the offending coordinate (1-based).
inline Eigen::MatrixXd log_returns(const Eigen::MatrixXd& prices) {
  const Eigen::Index n = prices.rows(), p = prices.cols();
  if (n < 2)
    throw std::invalid_argument("log_returns: need at least two price rows");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (!(prices(i, j) > 0))
        throw std::invalid_argument("log_returns: nonpositive price at row " +
                                    std::to_string(i + 1) + ", column " +
                                    std::to_string(j + 1));
  Eigen::MatrixXd logs = prices.array().log();
  return logs.bottomRows(n - 1) - logs.topRows(n - 1);
}

struct RollingSpec {
  long window = 504;
  long shift = 63;
};

/// Half-open index ranges [k*shift, k*shift + window) while they fit.
inline std::vector<std::pair<long, long>> rolling_windows(
    long n_obs, const RollingSpec& spec) {
  if (spec.window < 2)
    throw std::invalid_argument("rolling_windows: window >= 2");
  if (spec.shift < 1 || spec.shift > spec.window)
    throw std::invalid_argument("rolling_windows: need 1 <= shift <= window");
  if (n_obs < spec.window)
    throw std::invalid_argument("rolling_windows: fewer observations than "
                                "the window length");
  std::vector<std::pair<long, long>> out;
  for (long start = 0; start + spec.window <= n_obs; start += spec.shift)
    out.emplace_back(start, start + spec.window);
  return out;
}

}  // namespace mtp2
