#pragma once

// Brute-force reference implementations. They enumerate everything and are
// only meant for small instances; every call checks its budget first.

#include "hmnc/seminorm.hpp"

namespace hmnc::oracle {

struct OracleBudget {
  Index max_points = 16;
  Index max_centers = 4;
  Index max_partition_points = 10;
  Index power_iterations = 10000;
  double tolerance = 1e-10;
};

/// min over all m-subsets C of max_i min_{c∈C} d(i, c).
double exact_cover_radius(const Eigen::MatrixXd &distances, Index m, const OracleBudget &budget = {});

/// max over all m-subsets S of min_{a≠b∈S} d(a, b).
double exact_separation_number(const Eigen::MatrixXd &distances, Index m, const OracleBudget &budget = {});

/// min over all set partitions into ≤ m parts of the largest part diameter.
double exact_partition_diameter(const Eigen::MatrixXd &distances, Index m, const OracleBudget &budget = {});

/// True iff the instance fits the enumeration budget of the corresponding oracle.
bool cover_in_budget(Index points, Index m, const OracleBudget &budget = {});
bool separation_in_budget(Index points, Index m, const OracleBudget &budget = {});
bool partition_in_budget(Index points, const OracleBudget &budget = {});

struct SpectralReference {
  double value = 0;
  bool converged = false;
  Index iterations = 0;
};

/// Largest singular value by power iteration on M*M, restarted from two seeded
/// random vectors. Converged means both runs reached residual ‖Gv − μv‖ ≤ tol·μ.
SpectralReference spectral_norm_reference(const CMatrix &m, std::uint64_t seed = 0, const OracleBudget &budget = {});

/// Seminorm by explicit coordinate loops, with each tail sum added in
/// increasing order of magnitude.
double seminorm_reference(const AdmissiblePair &pair, const ModuleVector &x);

} // namespace hmnc::oracle
