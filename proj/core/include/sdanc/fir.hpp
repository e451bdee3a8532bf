#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sdanc {

/// FIR filter K(z) = sum_k taps[k] z^{-k}.
class FirFilter {
 public:
  /// N zero taps.
  explicit FirFilter(Eigen::Index n);
  explicit FirFilter(Eigen::VectorXd taps);

  Eigen::Index size() const noexcept { return taps_.size(); }
  const Eigen::VectorXd& taps() const noexcept { return taps_; }
  double operator[](Eigen::Index k) const { return taps_(k); }

  /// sum_k taps[k] * history[k], history[0] being the newest sample.
  /// A shorter history is zero-padded (causal input).
  double apply(std::span<const double> history) const;

 private:
  Eigen::VectorXd taps_;
};

}  // namespace sdanc
