#include "hmnc/opmnc.hpp"

#include <algorithm>
#include <cmath>

namespace hmnc {

std::vector<double> lambda_op_profile(const AdjointableOperator &t, Index n_max)
{
  if (n_max < 0 || n_max > t.truncation())
    throw PreconditionError("lambda_op_profile: n_max " + std::to_string(n_max) + " outside [0, " +
                            std::to_string(t.truncation()) + "]");
  std::vector<double> s;
  for (Index n = 0; n <= n_max; ++n)
    s.push_back(op_norm(tail_operator(t, n)));
  return s;
}

std::optional<Index> vanishing_level(const AdjointableOperator &t, double tol)
{
  auto s = lambda_op_profile(t, t.truncation());
  for (Index n = 0; n <= t.truncation(); ++n)
    if (s[static_cast<std::size_t>(n)] <= tol)
      return n;
  return std::nullopt;
}

OperatorPropertyReport operator_property_suite(const AdjointableOperator &t, const AdjointableOperator &s,
                                               const AdjointableOperator &k, double c, Index n_eval)
{
  t.require_compatible(s, "operator_property_suite");
  t.require_compatible(k, "operator_property_suite");
  if (!(c > 0))
    throw PreconditionError("operator_property_suite: c must be positive");
  if (!k.support())
    throw PreconditionError("operator_property_suite: K must be a theta combination with known support");
  if (*k.support() > n_eval)
    throw PreconditionError("operator_property_suite: K is supported up to level " + std::to_string(*k.support()) +
                            ", beyond n_eval " + std::to_string(n_eval));

  auto lambda = [n_eval](const AdjointableOperator &op) {
    auto p = lambda_op_profile(op, n_eval);
    return *std::min_element(p.begin(), p.end());
  };

  OperatorPropertyReport r;
  r.n_eval = n_eval;
  r.lambda_t = lambda(t);
  r.lambda_s = lambda(s);
  r.lambda_sum = lambda(t + s);
  r.subadditivity_slack = r.lambda_t + r.lambda_s - r.lambda_sum;
  r.homogeneity_defect = std::abs(lambda(cplx(c) * t) - c * r.lambda_t);
  r.norm_slack = op_norm(t) - r.lambda_t;

  auto base = lambda_op_profile(t, t.truncation());
  auto perturbed = lambda_op_profile(t + k, t.truncation());
  for (Index n = *k.support(); n <= t.truncation(); ++n)
    r.perturbation_defect = std::max(
        r.perturbation_defect, std::abs(perturbed[static_cast<std::size_t>(n)] - base[static_cast<std::size_t>(n)]));

  r.holds = r.subadditivity_slack >= -1e-9 && r.homogeneity_defect <= 1e-10 &&
            r.norm_slack >= -1e-10 && r.perturbation_defect <= 1e-12;
  return r;
}

SampledSet image_ball_sampler(const AdjointableOperator &t, Index count, std::uint64_t seed)
{
  if (count < 1)
    throw PreconditionError("image_ball_sampler: count must be at least 1");
  return SampledSet::image(t, 1.0, count, seed);
}

} // namespace hmnc
