#include "hmnc/witness.hpp"

#include "hmnc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmnc {

namespace {

std::string exhausted_message(Index level, double best, double target)
{
  std::ostringstream out;
  out << "sampler exhausted at level " << level << ": best tail " << best << " does not exceed " << target;
  return out.str();
}

std::string truncation_message(Index found, Index required, Index minimal)
{
  std::ostringstream out;
  out << "truncation too small: found " << found << " witnesses, need " << required
      << "; estimated minimal truncation " << minimal;
  return out.str();
}

} // namespace

SamplerExhausted::SamplerExhausted(Index level, double best, double target)
    : NumericalError(exhausted_message(level, best, target)), level_(level), best_(best), target_(target)
{
}

TruncationTooSmall::TruncationTooSmall(Index found, Index required, Index minimal_truncation)
    : NumericalError(truncation_message(found, required, minimal_truncation)), found_(found), required_(required),
      minimal_truncation_(minimal_truncation)
{
}

WitnessCertificate build_witness_system(std::span<const ModuleVector> candidates, std::span<const double> profile,
                                        double epsilon, const WitnessOptions &options)
{
  if (candidates.empty())
    throw PreconditionError("build_witness_system: no candidates");
  if (profile.empty())
    throw PreconditionError("build_witness_system: empty profile");
  for (const auto &z : candidates)
    z.require_compatible(candidates.front(), "build_witness_system");
  const double lambda = *std::min_element(profile.begin(), profile.end());
  if (!(epsilon > 0) || !(epsilon < lambda))
    throw PreconditionError("build_witness_system: need 0 < epsilon < lambda (epsilon " + std::to_string(epsilon) +
                            ", lambda " + std::to_string(lambda) + ")");
  const Index n = candidates.front().truncation();
  const Index window_end = static_cast<Index>(profile.size()) - 1;
  if (window_end > n)
    throw PreconditionError("build_witness_system: profile longer than the truncation");

  // tails[c][i] = ‖(I − P_i) z_c‖ for i = 0..N.
  std::vector<std::vector<double>> tails;
  for (const auto &z : candidates) {
    std::vector<double> t(static_cast<std::size_t>(n + 1));
    for (Index i = 0; i <= n; ++i)
      t[static_cast<std::size_t>(i)] = vec_norm(tail(z, i));
    tails.push_back(std::move(t));
  }

  const double reach = lambda - epsilon / 4;
  const double small = epsilon / 4;
  std::vector<Index> breaks{0};
  std::vector<Index> chosen;
  Index level = 0;
  while (level < n) {
    Index pick = -1;
    Index pick_next = n + 1;
    double best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto &t = tails[c];
      best = std::max(best, t[static_cast<std::size_t>(level)]);
      if (!(t[static_cast<std::size_t>(level)] > reach))
        continue;
      Index next = level + 1;
      while (next < n && !(t[static_cast<std::size_t>(next)] < small))
        ++next;
      if (next < pick_next) {
        pick_next = next;
        pick = static_cast<Index>(c);
      }
    }
    if (pick < 0) {
      if (level <= window_end)
        throw SamplerExhausted(level, best, reach);
      break;
    }
    chosen.push_back(pick);
    breaks.push_back(pick_next);
    level = pick_next;
  }

  const Index found = static_cast<Index>(chosen.size());
  if (found < options.required) {
    double width = static_cast<double>(breaks.back() - breaks.front()) / static_cast<double>(std::max<Index>(found, 1));
    Index minimal = breaks.front() + static_cast<Index>(std::ceil(width * static_cast<double>(options.required)));
    throw TruncationTooSmall(found, options.required, std::max(minimal, n + 1));
  }

  std::vector<ModuleVector> witnesses;
  for (Index c : chosen)
    witnesses.push_back(candidates[static_cast<std::size_t>(c)]);
  auto xs = build_blocked_system(witnesses, breaks);
  std::vector<State> states;
  for (Index j = 0; j < found; ++j) {
    auto piece = band(witnesses[static_cast<std::size_t>(j)], breaks[static_cast<std::size_t>(j)],
                      breaks[static_cast<std::size_t>(j + 1)]);
    states.push_back(norming_state(inner(xs[static_cast<std::size_t>(j)], piece), options.norming_tol));
  }
  return WitnessCertificate{AdmissiblePair(std::move(xs), std::move(states)),
                            std::move(witnesses),
                            std::move(chosen),
                            std::move(breaks),
                            lambda,
                            epsilon,
                            lambda - epsilon};
}

CertificateCheck validate_certificate(const WitnessCertificate &cert, Index max_m, double tol)
{
  CertificateCheck check;
  const Index count = cert.size();
  const auto &pair = cert.pair;
  const double lambda = cert.lambda_value;
  const double eps = cert.epsilon;

  if (pair.size() != count || static_cast<Index>(cert.breaks.size()) != count + 1)
    throw PreconditionError("validate_certificate: inconsistent certificate sizes");

  check.bessel = bessel_bound(pair.system());
  std::vector<ModuleVector> samples = cert.witnesses;
  samples.insert(samples.end(), pair.system().begin(), pair.system().end());
  auto adm = check_admissible(pair.system(), samples, 1e-9);
  check.worst_residual = adm.worst_eigenvalue;
  if (check.bessel > 1 + 1e-9 || !adm.admissible)
    check.failures.push_back("admissibility");

  check.diagonal_margin = std::numeric_limits<double>::infinity();
  check.cross_margin = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < count; ++j) {
    const State &phi = pair.state(j);
    const ModuleVector &xj = pair.vector(j);
    double diag = std::abs(phi(inner(cert.witnesses[static_cast<std::size_t>(j)], xj)));
    check.diagonal_margin = std::min(check.diagonal_margin, diag - (lambda - eps / 2));
    for (Index l = 0; l < count; ++l) {
      if (l == j)
        continue;
      const ModuleVector &zl = cert.witnesses[static_cast<std::size_t>(l)];
      if (!(vec_norm(tail(zl, cert.breaks[static_cast<std::size_t>(j)])) < eps / 4))
        continue;
      ++check.cross_pairs;
      check.cross_margin = std::min(check.cross_margin, eps / 2 - std::abs(phi(inner(zl, xj))));
    }
  }
  if (!(check.diagonal_margin > 0))
    check.failures.push_back("diagonal_inequality");
  if (!(check.cross_margin > 0))
    check.failures.push_back("cross_inequality");

  auto d = distance_matrix(pair, cert.witnesses);
  check.pairwise_margin = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < count; ++a)
    for (Index b = a + 1; b < count; ++b)
      check.pairwise_margin = std::min(check.pairwise_margin, d(a, b) - cert.guaranteed_bound);
  if (check.pairwise_margin < -tol)
    check.failures.push_back("pairwise_separation");

  check.radius_margin = std::numeric_limits<double>::infinity();
  for (Index m = 1; m <= std::min(max_m, count - 1); ++m) {
    double r = covering_radius(d, m, SolveMode::exact).value;
    check.radii.emplace_back(m, r);
    check.radius_margin = std::min(check.radius_margin, r - cert.guaranteed_bound);
  }
  if (check.radius_margin < -tol)
    check.failures.push_back("radius_floor");

  check.valid = check.failures.empty();
  return check;
}

} // namespace hmnc
