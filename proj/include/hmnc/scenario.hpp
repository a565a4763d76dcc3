#pragma once

// Scenario files: JSON documents describing an algebra, a truncation and the
// sets, operators and admissible-pair generators to run. Unknown keys are
// rejected. See docs/scenario-format.md.

#include "hmnc/serialize.hpp"

#include <filesystem>
#include <string_view>

namespace hmnc::harness {

// Invalid scenario. `location` is "line:col" for syntax errors and a JSON
// pointer otherwise.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string location, const std::string &message);
  const std::string &location() const noexcept { return location_; }

private:
  std::string location_;
};

struct Tolerances {
  double projection = 1e-9;
  double psd = 1e-9;
  double normality = 1e-9;
};

struct ProjectionSpec {
  enum class Kind { identity, head, matrix };
  Kind kind = Kind::identity;
  Index head = 0;
  // Raw blocks for Kind::matrix; not checked at parse time.
  std::vector<CMatrix> blocks;
};

struct SetSpec {
  std::string name;
  SetKind kind = SetKind::finite_list;
  double radius = 1;
  ProjectionSpec projection;
  std::vector<ModuleVector> points;
  // Index into Scenario::operators for images.
  Index operator_index = -1;
  // Random samples beyond the per-level tail maximizers.
  Index samples = 8;
};

struct OperatorSpec {
  std::string name;
  AdjointableOperator op;
};

struct PairSpec {
  enum class Kind { basis, blocked, witness };
  Kind kind = Kind::basis;
  std::vector<Index> breaks;
  double epsilon = 0;
};

struct WitnessSpec {
  std::string set;
  double epsilon = 0;
  Index count = 1;
};

struct Scenario {
  std::string name;
  AlgebraShape shape;
  Index truncation = 1;
  std::uint64_t seed = 0;
  // Defaults to truncation − 1.
  Index n_max = 0;
  MRange m_range;
  // Random draws per verify invariant.
  Index samples = 50;
  Tolerances tolerances;
  std::vector<OperatorSpec> operators;
  std::vector<SetSpec> sets;
  std::vector<PairSpec> pairs;
  std::optional<WitnessSpec> witness;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path &path);

/// Samples the set; matrix projections are checked against the projection tolerance.
SampledSet build_set(const Scenario &s, const SetSpec &spec, std::uint64_t seed);
Projection build_projection(const Scenario &s, const ProjectionSpec &spec);

/// Pairs for the basis and blocked generators. Witness generators are
/// resolved per set by the caller.
std::vector<AdmissiblePair> build_pairs(const Scenario &s, std::uint64_t seed);

/// Deterministic stream seeds derived from the scenario seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace hmnc::harness
