#pragma once

// Measures of noncompactness of operators: λ_o(T) = λ(T(B_1)), computed as
// the profile s_n = ‖(I − P_n) T‖.

#include "hmnc/setmnc.hpp"

namespace hmnc {

/// s_0..s_{n_max}; s_N = 0.
std::vector<double> lambda_op_profile(const AdjointableOperator &t, Index n_max);

/// First n with s_n ≤ tol, if any. At truncation N it is at most N.
std::optional<Index> vanishing_level(const AdjointableOperator &t, double tol = 0);

struct OperatorPropertyReport {
  Index n_eval = 0;
  double lambda_t = 0;
  double lambda_s = 0;
  double lambda_sum = 0;
  // λ(T) + λ(S) − λ(T + S)
  double subadditivity_slack = 0;
  // |λ(cT) − c λ(T)|
  double homogeneity_defect = 0;
  // ‖T‖ − λ(T)
  double norm_slack = 0;
  // max over n in [support(K), N] of |s_n(T + K) − s_n(T)|
  double perturbation_defect = 0;
  bool holds = false;
};

/// λ values are taken over the window 0..n_eval. K must be a Θ-combination
/// supported at or below n_eval, and c > 0.
OperatorPropertyReport operator_property_suite(const AdjointableOperator &t, const AdjointableOperator &s,
                                               const AdjointableOperator &k, double c, Index n_eval);

/// Samples of T(B_1): tail maximizers for every level, then `count` images of
/// random unit vectors drawn from `seed`.
SampledSet image_ball_sampler(const AdjointableOperator &t, Index count, std::uint64_t seed);

} // namespace hmnc
