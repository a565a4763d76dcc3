#pragma once

// Witness systems for the lower bound χ*(E) ≥ λ(E) − ε.
//
// From candidates z of the set, the builder walks through the levels
// i_1 = 0 < i_2 < ... : at level i it takes a candidate whose tail
// ‖(I − P_i) z‖ exceeds λ − ε/4 and whose next break i' (first level with
// ‖z − P_{i'} z‖ < ε/4) comes earliest. The band (P_{i'} − P_i) z, normalized,
// becomes x_j, and φ_j is a norming state of ⟨x_j, band⟩. Under the resulting
// seminorm any two witnesses are at least λ − ε apart.

#include "hmnc/seminorm.hpp"

namespace hmnc {

struct WitnessCertificate {
  AdmissiblePair pair;
  std::vector<ModuleVector> witnesses;
  // Position of each witness in the candidate list.
  std::vector<Index> source_index;
  // i_1 < ... < i_{J+1}; witness j owns the band [breaks[j], breaks[j+1]).
  std::vector<Index> breaks;
  double lambda_value = 0;
  double epsilon = 0;
  double guaranteed_bound = 0;

  Index size() const { return static_cast<Index>(witnesses.size()); }
};

struct WitnessOptions {
  // Minimum number of witnesses; fewer raises TruncationTooSmall.
  Index required = 1;
  double norming_tol = 1e-9;
};

// A level inside the profile window where no candidate reaches λ − ε/4.
class SamplerExhausted : public NumericalError {
public:
  SamplerExhausted(Index level, double best, double target);
  Index level() const noexcept { return level_; }
  double best() const noexcept { return best_; }
  double target() const noexcept { return target_; }

private:
  Index level_;
  double best_, target_;
};

class TruncationTooSmall : public NumericalError {
public:
  TruncationTooSmall(Index found, Index required, Index minimal_truncation);
  Index found() const noexcept { return found_; }
  Index required() const noexcept { return required_; }
  // Extrapolated from the average band width; assumes the tails keep
  // exceeding λ − ε/4 on a longer window.
  Index minimal_truncation() const noexcept { return minimal_truncation_; }

private:
  Index found_, required_, minimal_truncation_;
};

/// `profile` holds s_0..s_{n_max}; λ is its minimum and needs 0 < ε < λ.
WitnessCertificate build_witness_system(std::span<const ModuleVector> candidates, std::span<const double> profile,
                                        double epsilon, const WitnessOptions &options = {});

struct CertificateCheck {
  bool valid = false;
  double bessel = 0;
  double worst_residual = 0;
  // min_j |φ_j⟨z_j, x_j⟩| − (λ − ε/2); must be positive.
  double diagonal_margin = 0;
  // min of ε/2 − |φ_j⟨z_l, x_j⟩| over l with ‖(I − P_{i_j}) z_l‖ < ε/4; must be positive.
  double cross_margin = 0;
  Index cross_pairs = 0;
  // min_{j≠l} p(z_j − z_l) − bound.
  double pairwise_margin = 0;
  // (m, r_m) for m = 1..min(max_m, J − 1), exact m-center radii of the witnesses.
  std::vector<std::pair<Index, double>> radii;
  double radius_margin = 0;
  std::vector<std::string> failures;
};

CertificateCheck validate_certificate(const WitnessCertificate &cert, Index max_m = 8, double tol = 1e-8);

} // namespace hmnc
