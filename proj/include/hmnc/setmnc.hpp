#pragma once

// Measures of noncompactness of sets in A^N.
//
// λ profile: s_n = sup_{x∈E} ‖x − P_n x‖, λ = min over the window 0..n_max.
// The Hausdorff, Kuratowski and Istrăţescu measures of a sampled set are
// bracketed: λ is the upper end, and m-indexed covering, partition and
// separation profiles of the tails (I − P_{n_max}) x under explicit seminorms
// give the lower end.

#include "hmnc/operator.hpp"
#include "hmnc/solvers.hpp"
#include "hmnc/witness.hpp"

#include <optional>

namespace hmnc {

enum class SetKind { finite_list, ball, image };

/// A set descriptor with deterministic sample points.
///
/// finite_list  E is exactly the listed points.
/// ball         E = {x ∈ ran Q : ‖x‖ ≤ r}; drawn as r·Q w.
/// image        E = {r·T w : ‖w‖ ≤ 1}.
/// For ball and image, the samples contain one tail maximizer per level
/// n = 0..N−1 (a unit w attaining ‖(I − P_n) r·G‖ for the generator G = Q or
/// T) followed by `count` images of random unit vectors.
class SampledSet {
public:
  static SampledSet finite_list(std::vector<ModuleVector> points);
  static SampledSet ball(const Projection &q, const AlgebraShape &shape, Index truncation, double radius, Index count,
                         std::uint64_t seed);
  static SampledSet image(AdjointableOperator t, double radius, Index count, std::uint64_t seed);

  SetKind kind() const { return kind_; }
  const AlgebraShape &shape() const { return shape_; }
  Index truncation() const { return n_; }
  const std::vector<ModuleVector> &points() const { return points_; }
  /// Unit vectors w with points()[i] = radius·G w (empty for finite lists).
  const std::vector<ModuleVector> &preimages() const { return preimages_; }
  /// Q (as an operator) for balls, T for images.
  const AdjointableOperator &generator() const { return *generator_; }
  bool has_generator() const { return generator_.has_value(); }
  double radius() const { return radius_; }
  std::uint64_t seed() const { return seed_; }
  /// ‖E‖ = sup ‖x‖: exact maximum for lists, radius·‖G‖ otherwise.
  double norm_bound() const;
  /// Largest violation of the descriptor over the drawn points.
  double membership_defect() const;

private:
  SampledSet() = default;

  SetKind kind_ = SetKind::finite_list;
  AlgebraShape shape_;
  Index n_ = 0;
  std::vector<ModuleVector> points_;
  std::vector<ModuleVector> preimages_;
  std::optional<AdjointableOperator> generator_;
  double radius_ = 1;
  std::uint64_t seed_ = 0;
};

/// Unit vector w with ‖(I − P_n) T w‖ = ‖(I − P_n) T‖ (nullopt if that norm is 0).
std::optional<ModuleVector> tail_maximizer(const AdjointableOperator &t, Index n);

/// s_0..s_{n_max}. Exact: maxima over lists, radius·‖(I − P_n) G‖ otherwise.
std::vector<double> lambda_profile(const SampledSet &e, Index n_max);

/// sup_{x∈E} d(x, ran Q), exact for every set kind.
double sup_distance(const SampledSet &e, const Projection &q);

double lambda_via_projection_family(const SampledSet &e, std::span<const Projection> family);

struct MRange {
  Index lo = 1;
  Index hi = 4;
};

struct ProfilePoint {
  Index m = 0;
  double value = 0;
  bool exact = true;
};

struct CertificateSummary {
  double epsilon = 0;
  double guaranteed_bound = 0;
  Index witnesses = 0;
  bool valid = false;
  double radius_margin = 0;
};

struct MncReport {
  Index n_max = 0;
  std::vector<double> lambda_profile;
  double lambda_value = 0;
  double norm_bound = 0;
  double chi_lower = 0;
  double chi_upper = 0;
  // "none", "separation" or "certificate".
  std::string lower_source = "none";
  std::optional<Index> attaining_pair;
  std::optional<Index> attaining_m;
  // Each point is the maximum over the pair family.
  std::vector<ProfilePoint> covering_surrogate;
  std::vector<ProfilePoint> alpha_surrogate;
  std::vector<ProfilePoint> separation_surrogate;
  std::optional<CertificateSummary> certificate;

  bool bracket_holds(double tol = 1e-8) const { return chi_lower <= chi_upper + tol; }
};

/// chi_upper = λ. chi_lower = max over pairs and m in the range of s_{m+1}/2 on
/// the tails, raised to the certificate bound when a valid certificate for the
/// same λ is attached.
MncReport mnc_bracket(const SampledSet &e, std::span<const AdmissiblePair> pairs, Index n_max, MRange m_range,
                      const WitnessCertificate *certificate = nullptr, SolveMode mode = SolveMode::automatic);

struct ComplementedReport {
  Index n_max = 0;
  // a_n = sup ‖x − P_n x‖ in the ambient module.
  std::vector<double> ambient_profile;
  // t_n = sup ‖x − R_n x‖ with R_n the projection onto ran(Q P_n).
  std::vector<double> transported_profile;
  double lambda_submodule = 0;
  double lambda_ambient = 0;
  // min_n (a_n − t_n); nonnegative when the transported family is no worse.
  double pointwise_slack = 0;
  bool holds = false;
};

/// For E ⊆ ran Q: λ from the transported family {R_n} agrees with λ computed
/// in the ambient module over {P_n} ∪ {R_n}, and t_n ≤ a_n pointwise.
ComplementedReport complemented_lambda_check(const SampledSet &e, const Projection &q, Index n_max,
                                             double tol = 1e-8);

struct DirectSumEntry {
  // "left_first", "left_second" or "right".
  std::string relation;
  Index m1 = 0;
  Index m2 = 0;
  double lhs = 0;
  double rhs = 0;
};

struct DirectSumReport {
  std::vector<DirectSumEntry> entries;
  double worst_slack = 0;
  // max |p_{J_j X_j}(y) − p_{X_j}(p_j y)| and |p_{p_j X}(p_j y)| identities.
  double identity_defect = 0;
  bool holds = false;
};

/// Finite-instance two-sided estimate for E ⊆ A^{N_1} ⊕ A^{N_2}:
///   r_m(p_j E; X_j) ≤ r_m(E; J_j X_j)
///   R(E; X; product net) ≤ r_{m1}(p_1 E; p_1 X) + r_{m2}(p_2 E; p_2 X)
/// where the product net is {J_1 z + J_2 w} over optimal centers z, w.
DirectSumReport direct_sum_chi_check(const DirectSumContext &ctx, const SampledSet &e, const AdmissiblePair &first,
                                     const AdmissiblePair &second, const AdmissiblePair &sum, MRange m_range,
                                     double tol = 1e-8, SolveMode mode = SolveMode::automatic);

AdmissiblePair embed_pair(const DirectSumContext &ctx, Summand side, const AdmissiblePair &pair);
AdmissiblePair restrict_pair(const DirectSumContext &ctx, Summand side, const AdmissiblePair &pair);

const char *to_string(SetKind kind);

} // namespace hmnc
