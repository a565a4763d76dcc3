#pragma once

// Admissible systems and the seminorms p_{X,Φ} they induce on A^N.
//
// A finite admissible system X = {x_1..x_M} satisfies ‖x_i‖ ≤ 1 and
//   Σ_i ⟨x, x_i⟩⟨x_i, x⟩ ≤ ⟨x, x⟩   for every x.
// Paired with states Φ = {φ_1..φ_M} it defines
//   p_{X,Φ}(x) = sqrt( max_k Σ_{i≥k} |φ_k(⟨x, x_i⟩)|² ),
// where the state index and the start of the tail sum are the same k.

#include "hmnc/hmodule.hpp"

#include <optional>
#include <span>

namespace hmnc {

class AdmissiblePair {
public:
  static constexpr double norm_slack = 1e-10;

  AdmissiblePair(std::vector<ModuleVector> system, std::vector<State> states);

  Index size() const { return static_cast<Index>(system_.size()); }
  const AlgebraShape &shape() const { return system_.front().shape(); }
  Index truncation() const { return system_.front().truncation(); }
  const std::vector<ModuleVector> &system() const { return system_; }
  const std::vector<State> &states() const { return states_; }
  const ModuleVector &vector(Index i) const { return system_[static_cast<std::size_t>(i)]; }
  const State &state(Index i) const { return states_[static_cast<std::size_t>(i)]; }

private:
  std::vector<ModuleVector> system_;
  std::vector<State> states_;
};

struct AdmissibilityReport {
  bool admissible = false;
  // Most negative eigenvalue of ⟨x,x⟩ − Σ⟨x,x_i⟩⟨x_i,x⟩ over the samples.
  double worst_eigenvalue = 0;
  Index worst_sample = -1;
  // First system vector with ‖x_i‖ > 1 + tol; residuals are not tested then.
  std::optional<Index> norm_violation;
};

/// Tests the Bessel-type bound on a finite sample domain.
AdmissibilityReport check_admissible(std::span<const ModuleVector> system, std::span<const ModuleVector> samples,
                                     double tol = 1e-9);

/// max_k λ_max(Σ_i X_{i,k} X_{i,k}*): the system is admissible on all of A^N iff this is ≤ 1.
double bessel_bound(std::span<const ModuleVector> system);

double seminorm_eval(const AdmissiblePair &pair, const ModuleVector &x);

inline double pseudometric(const AdmissiblePair &pair, const ModuleVector &x, const ModuleVector &y)
{
  return seminorm_eval(pair, x - y);
}

/// Symmetric matrix of pseudometric distances between the points.
Eigen::MatrixXd distance_matrix(const AdmissiblePair &pair, std::span<const ModuleVector> points);

/// z_i = normalized (P_{n_i} − P_{n_{i−1}}) y_i for consecutive breaks n_0 < n_1 < ...
///
/// Needs breaks.size() == Y.size() + 1. Throws PreconditionError naming the
/// 1-based index of the first block whose norm is ≤ tol.
std::vector<ModuleVector> build_blocked_system(std::span<const ModuleVector> ys, std::span<const Index> breaks,
                                               double tol = 1e-12);

/// (X^u, Φ^u) with x_i^u = x_i u* and φ^u(a) = φ(u* a u); p_{X,Φ}(x u) = p_{X^u,Φ^u}(x).
AdmissiblePair transform_unitary(const AdmissiblePair &pair, const Element &u, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Pair generators

/// X = {e_1..e_N} with one state for every slot.
AdmissiblePair basis_pair(const AlgebraShape &shape, Index truncation, const State &state);

/// Random Gaussian system scaled so that its Bessel bound is uniform in [0.3, 1].
std::vector<ModuleVector> random_admissible_system(const AlgebraShape &shape, Index truncation, Index size, Rng &rng);

AdmissiblePair random_admissible_pair(const AlgebraShape &shape, Index truncation, Index size, Rng &rng);

/// Blocked system over random data with random increasing breaks starting at 0.
AdmissiblePair random_blocked_pair(const AlgebraShape &shape, Index truncation, Rng &rng);

} // namespace hmnc
