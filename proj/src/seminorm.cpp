#include "hmnc/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hmnc {

AdmissiblePair::AdmissiblePair(std::vector<ModuleVector> system, std::vector<State> states)
    : system_(std::move(system)), states_(std::move(states))
{
  if (system_.empty())
    throw PreconditionError("admissible pair needs at least one vector");
  if (system_.size() != states_.size())
    throw PreconditionError("admissible pair needs one state per system vector");
  for (std::size_t i = 0; i < system_.size(); ++i) {
    system_[i].require_compatible(system_.front(), "admissible pair");
    require_same_shape(states_[i].shape(), system_.front().shape(), "admissible pair state");
    if (vec_norm(system_[i]) > 1 + norm_slack)
      throw PreconditionError("admissible pair: ‖x_" + std::to_string(i + 1) + "‖ exceeds 1");
  }
}

AdmissibilityReport check_admissible(std::span<const ModuleVector> system, std::span<const ModuleVector> samples,
                                     double tol)
{
  AdmissibilityReport report;
  for (std::size_t i = 0; i < system.size(); ++i)
    if (vec_norm(system[i]) > 1 + tol) {
      report.norm_violation = static_cast<Index>(i);
      return report;
    }
  report.worst_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const ModuleVector &x = samples[s];
    Element residual = inner(x, x);
    for (const auto &xi : system) {
      Element g = inner(x, xi);
      residual -= g * alg_adjoint(g);
    }
    double lo = min_eigenvalue(residual);
    if (lo < report.worst_eigenvalue) {
      report.worst_eigenvalue = lo;
      report.worst_sample = static_cast<Index>(s);
    }
  }
  if (samples.empty())
    report.worst_eigenvalue = 0;
  report.admissible = report.worst_eigenvalue >= -tol;
  return report;
}

double bessel_bound(std::span<const ModuleVector> system)
{
  if (system.empty())
    return 0;
  const AlgebraShape &shape = system.front().shape();
  double bound = 0;
  for (Index k = 0; k < shape.blocks(); ++k) {
    CMatrix s = CMatrix::Zero(system.front().stack(k).rows(), system.front().stack(k).rows());
    for (const auto &x : system)
      s.noalias() += x.stack(k) * x.stack(k).adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
    bound = std::max(bound, es.eigenvalues().maxCoeff());
  }
  return bound;
}

double seminorm_eval(const AdmissiblePair &pair, const ModuleVector &x)
{
  const Index m = pair.size();
  std::vector<Element> g;
  g.reserve(static_cast<std::size_t>(m));
  for (const auto &xi : pair.system())
    g.push_back(inner(x, xi));
  double best = 0;
  for (Index k = 0; k < m; ++k) {
    const State &phi = pair.state(k);
    double sum = 0;
    for (Index i = k; i < m; ++i)
      sum += std::norm(phi(g[static_cast<std::size_t>(i)]));
    best = std::max(best, sum);
  }
  return std::sqrt(best);
}

Eigen::MatrixXd distance_matrix(const AdmissiblePair &pair, std::span<const ModuleVector> points)
{
  const Index n = static_cast<Index>(points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = pseudometric(pair, points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
  return d;
}

std::vector<ModuleVector> build_blocked_system(std::span<const ModuleVector> ys, std::span<const Index> breaks,
                                               double tol)
{
  if (breaks.size() != ys.size() + 1)
    throw PreconditionError("build_blocked_system: need exactly one more break than vectors");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (breaks[i] <= breaks[i - 1])
      throw PreconditionError("build_blocked_system: breaks must be strictly increasing");
  std::vector<ModuleVector> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (breaks.front() < 0 || breaks.back() > ys[i].truncation())
      throw PreconditionError("build_blocked_system: breaks outside [0, N]");
    ModuleVector piece = band(ys[i], breaks[i], breaks[i + 1]);
    double norm = vec_norm(piece);
    if (!(norm > tol))
      throw PreconditionError("build_blocked_system: block " + std::to_string(i + 1) + " has norm " +
                              std::to_string(norm) + " <= tolerance");
    out.push_back((1.0 / norm) * piece);
  }
  return out;
}

AdmissiblePair transform_unitary(const AdmissiblePair &pair, const Element &u, double tol)
{
  if (unitarity_defect(u) > tol)
    throw PreconditionError("transform_unitary: element is not unitary");
  Element u_star = alg_adjoint(u);
  std::vector<ModuleVector> xs;
  std::vector<State> phis;
  for (Index i = 0; i < pair.size(); ++i) {
    xs.push_back(right_mul(pair.vector(i), u_star));
    phis.push_back(pair.state(i).conjugated(u));
  }
  return AdmissiblePair(std::move(xs), std::move(phis));
}

AdmissiblePair basis_pair(const AlgebraShape &shape, Index truncation, const State &state)
{
  std::vector<ModuleVector> xs;
  for (Index j = 0; j < truncation; ++j)
    xs.push_back(ModuleVector::basis(shape, truncation, j));
  return AdmissiblePair(std::move(xs), std::vector<State>(static_cast<std::size_t>(truncation), state));
}

std::vector<ModuleVector> random_admissible_system(const AlgebraShape &shape, Index truncation, Index size, Rng &rng)
{
  std::vector<ModuleVector> xs;
  for (Index i = 0; i < size; ++i)
    xs.push_back(random_vector<cplx>(shape, truncation, rng));
  std::uniform_real_distribution<double> target(0.3, 1.0);
  double scale = std::sqrt(target(rng) / bessel_bound(xs));
  for (auto &x : xs)
    x *= scale;
  return xs;
}

AdmissiblePair random_admissible_pair(const AlgebraShape &shape, Index truncation, Index size, Rng &rng)
{
  auto xs = random_admissible_system(shape, truncation, size, rng);
  std::vector<State> phis;
  for (Index i = 0; i < size; ++i)
    phis.push_back(State::random(shape, rng));
  return AdmissiblePair(std::move(xs), std::move(phis));
}

AdmissiblePair random_blocked_pair(const AlgebraShape &shape, Index truncation, Rng &rng)
{
  // Random subset of the interior cut points, always keeping 0 and N.
  std::vector<Index> breaks{0};
  std::bernoulli_distribution keep(0.5);
  for (Index n = 1; n < truncation; ++n)
    if (keep(rng))
      breaks.push_back(n);
  breaks.push_back(truncation);
  std::vector<ModuleVector> ys;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    ys.push_back(random_vector<cplx>(shape, truncation, rng));
  auto xs = build_blocked_system(ys, breaks);
  std::vector<State> phis;
  for (std::size_t i = 0; i < xs.size(); ++i)
    phis.push_back(State::random(shape, rng));
  return AdmissiblePair(std::move(xs), std::move(phis));
}

} // namespace hmnc
