#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace blockmod {

/// x log x with the continuous extension 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Negative Bernoulli entropy x log x + (1-x) log(1-x) on [0, 1]; tau(0) =
/// tau(1) = 0. NaN outside the domain.
inline double tau(double x) {
  if (!(x >= 0.0 && x <= 1.0)) return std::nan("");
  return xlogx(x) + xlogx(1.0 - x);
}

/// u log u - u on [0, inf), tau0(0) = 0.
inline double tau0(double u) {
  if (!(u >= 0.0)) return std::nan("");
  return xlogx(u) - u;
}

/// Modulus of continuity of tau: |tau(x) - tau(y)| <= tau_modulus(|x - y|),
/// tau_modulus(d) = 2 d max(1, log(1/d)).
inline double tau_modulus(double d) {
  if (d <= 0.0) return 0.0;
  return 2.0 * d * std::max(1.0, -std::log(d));
}

using TauFunction = double (*)(double);

/// log Gamma for positive arguments. Backed by the C library routine.
inline double log_gamma(double x) { return std::lgamma(x); }

inline double log_beta(double x, double y) {
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

/// log Gamma(k + offset) for integer k >= 0, tabulated up to a size cap and
/// computed directly beyond it.
class LogGammaTable {
 public:
  LogGammaTable() = default;
  LogGammaTable(double offset, std::int64_t max_k, std::int64_t cap = std::int64_t{1} << 20)
      : offset_(offset) {
    const std::int64_t size = std::min(max_k, cap) + 1;
    table_.resize(static_cast<std::size_t>(std::max<std::int64_t>(size, 0)));
    for (std::size_t k = 0; k < table_.size(); ++k)
      table_[k] = log_gamma(static_cast<double>(k) + offset_);
  }

  double operator()(std::int64_t k) const {
    return static_cast<std::size_t>(k) < table_.size() ? table_[static_cast<std::size_t>(k)]
                                                        : log_gamma(static_cast<double>(k) + offset_);
  }

 private:
  double offset_ = 0.0;
  std::vector<double> table_;
};

}  // namespace blockmod
