#include "hmnc/solvers.hpp"

#include "hmnc/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace hmnc {

namespace {

using Mask = std::uint64_t;

Mask bit(Index i) { return Mask{1} << i; }
Mask all_bits(Index n) { return n == 64 ? ~Mask{0} : bit(n) - 1; }
Index lowest(Mask m) { return std::countr_zero(m); }
Index count(Mask m) { return std::popcount(m); }

void require_points(const Eigen::MatrixXd &d, const char *what)
{
  if (d.rows() == 0)
    throw PreconditionError(std::string(what) + ": empty point list");
  if (d.rows() != d.cols())
    throw ShapeError(std::string(what) + ": distance matrix must be square");
}

// Sorted distinct entries of the upper triangle together with 0.
std::vector<double> candidate_values(const Eigen::MatrixXd &d)
{
  std::vector<double> v{0.0};
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = i + 1; j < d.cols(); ++j)
      v.push_back(d(i, j));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Smallest candidate value for which the monotone predicate holds; the last
// candidate must satisfy it.
template <class Pred>
double smallest_feasible(const std::vector<double> &values, Pred feasible)
{
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return values[lo];
}

class NodeCounter {
public:
  explicit NodeCounter(long long budget) : left_(budget) {}
  void tick()
  {
    if (--left_ < 0)
      throw BudgetExceeded("exact solver exceeded its node budget");
  }

private:
  long long left_;
};

// Can `left` balls of the given radius centered at points cover `uncovered`?
// On success `centers` holds the chosen centers.
bool coverable(const std::vector<Mask> &ball, Mask uncovered, Index left, NodeCounter &nodes,
               std::vector<Index> &centers)
{
  nodes.tick();
  if (uncovered == 0)
    return true;
  if (left == 0)
    return false;
  // Branch on the uncovered point with the fewest possible centers.
  Index pick = -1;
  Index fewest = 65;
  for (Mask u = uncovered; u; u &= u - 1) {
    Index p = lowest(u);
    Index c = count(ball[static_cast<std::size_t>(p)]);
    if (c < fewest) {
      fewest = c;
      pick = p;
    }
  }
  for (Mask c = ball[static_cast<std::size_t>(pick)]; c; c &= c - 1) {
    Index center = lowest(c);
    centers.push_back(center);
    if (coverable(ball, uncovered & ~ball[static_cast<std::size_t>(center)], left - 1, nodes, centers))
      return true;
    centers.pop_back();
  }
  return false;
}

bool has_clique(const std::vector<Mask> &adj, Mask candidates, Index need, NodeCounter &nodes,
                std::vector<Index> &clique)
{
  nodes.tick();
  if (need == 0)
    return true;
  while (candidates && count(candidates) >= need) {
    Index v = lowest(candidates);
    candidates &= ~bit(v);
    clique.push_back(v);
    if (has_clique(adj, candidates & adj[static_cast<std::size_t>(v)], need - 1, nodes, clique))
      return true;
    clique.pop_back();
  }
  return false;
}

struct Coloring {
  const std::vector<Mask> &conflict;
  const std::vector<Index> &order;
  Index colors;
  NodeCounter &nodes;
  std::vector<Mask> classes;

  bool extend(std::size_t pos, Index used)
  {
    nodes.tick();
    if (pos == order.size())
      return true;
    Index v = order[pos];
    // A fresh color is only tried once, which removes color permutations.
    Index top = std::min(used + 1, colors);
    for (Index c = 0; c < top; ++c) {
      auto &cls = classes[static_cast<std::size_t>(c)];
      if (cls & conflict[static_cast<std::size_t>(v)])
        continue;
      cls |= bit(v);
      bool ok = extend(pos + 1, std::max(used, c + 1));
      cls &= ~bit(v);
      if (ok)
        return true;
    }
    return false;
  }
};

void require_exact_size(Index n, const SolverLimits &limits, const char *what)
{
  if (n > limits.max_points || n > 64)
    throw BudgetExceeded(std::string(what) + ": exact mode supports at most " +
                         std::to_string(std::min<Index>(limits.max_points, 64)) + " points");
}

std::vector<Index> all_points(Index n)
{
  std::vector<Index> pts(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    pts[static_cast<std::size_t>(i)] = i;
  return pts;
}

Solution cover_exact(const Eigen::MatrixXd &d, Index m, const SolverLimits &limits)
{
  const Index n = d.rows();
  require_exact_size(n, limits, "covering_radius");
  if (m >= n)
    return {0.0, true, all_points(n)};
  NodeCounter nodes(limits.node_budget);
  std::vector<Index> centers;
  auto feasible = [&](double r) {
    std::vector<Mask> ball(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i == j || d(i, j) <= r)
          ball[static_cast<std::size_t>(i)] |= bit(j);
    centers.clear();
    return coverable(ball, all_bits(n), m, nodes, centers);
  };
  double radius = smallest_feasible(candidate_values(d), feasible);
  feasible(radius);
  std::sort(centers.begin(), centers.end());
  return {radius, true, centers};
}

Solution separation_exact(const Eigen::MatrixXd &d, Index m, const SolverLimits &limits)
{
  const Index n = d.rows();
  require_exact_size(n, limits, "separation_number");
  NodeCounter nodes(limits.node_budget);
  auto values = candidate_values(d);
  std::vector<Index> clique;
  auto feasible = [&](double v) {
    std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && d(i, j) >= v)
          adj[static_cast<std::size_t>(i)] |= bit(j);
    clique.clear();
    return has_clique(adj, all_bits(n), m, nodes, clique);
  };
  // Largest value v with an m-clique in {d ≥ v}; v = 0 always works.
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (feasible(values[mid]))
      lo = mid;
    else
      hi = mid - 1;
  }
  feasible(values[lo]);
  return {values[lo], true, clique};
}

Solution partition_exact(const Eigen::MatrixXd &d, Index m, const SolverLimits &limits)
{
  const Index n = d.rows();
  require_exact_size(n, limits, "partition_diameter");
  if (m >= n)
    return {0.0, true, {}};
  NodeCounter nodes(limits.node_budget);
  double value = smallest_feasible(candidate_values(d), [&](double diam) {
    std::vector<Mask> conflict(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (d(i, j) > diam)
          conflict[static_cast<std::size_t>(i)] |= bit(j);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
      order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return count(conflict[static_cast<std::size_t>(a)]) > count(conflict[static_cast<std::size_t>(b)]);
    });
    Coloring col{conflict, order, m, nodes, std::vector<Mask>(static_cast<std::size_t>(m), 0)};
    return col.extend(0, 0);
  });
  return {value, true, {}};
}

Solution cover_greedy(const Eigen::MatrixXd &d, Index m)
{
  auto centers = farthest_point_order(d, m);
  double radius = 0;
  for (Index i = 0; i < d.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index c : centers)
      best = std::min(best, d(i, c));
    radius = std::max(radius, best);
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return {radius, false, centers};
}

Solution separation_greedy(const Eigen::MatrixXd &d, Index m)
{
  auto pts = farthest_point_order(d, m);
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      sep = std::min(sep, d(pts[a], pts[b]));
  return {sep, false, pts};
}

Solution partition_greedy(const Eigen::MatrixXd &d, Index m)
{
  const Index n = d.rows();
  if (m >= n)
    return {0.0, false, {}};
  auto centers = farthest_point_order(d, m);
  std::vector<std::vector<Index>> parts(centers.size());
  for (Index i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c)
      if (d(i, centers[c]) < d(i, centers[best]))
        best = c;
    parts[best].push_back(i);
  }
  double diam = 0;
  for (const auto &part : parts)
    for (std::size_t a = 0; a < part.size(); ++a)
      for (std::size_t b = a + 1; b < part.size(); ++b)
        diam = std::max(diam, d(part[a], part[b]));
  return {diam, false, {}};
}

template <class Exact, class Greedy>
Solution dispatch(SolveMode mode, Exact exact, Greedy greedy)
{
  switch (mode) {
  case SolveMode::exact:
    return exact();
  case SolveMode::greedy:
    return greedy();
  case SolveMode::automatic:
    try {
      return exact();
    } catch (const BudgetExceeded &) {
      return greedy();
    }
  }
  throw PreconditionError("unknown solve mode");
}

} // namespace

std::vector<Index> farthest_point_order(const Eigen::MatrixXd &d, Index m)
{
  const Index n = d.rows();
  std::vector<Index> chosen;
  if (n == 0 || m <= 0)
    return chosen;
  chosen.push_back(0);
  Eigen::VectorXd nearest = d.col(0);
  while (static_cast<Index>(chosen.size()) < std::min(m, n)) {
    Index next = 0;
    for (Index i = 1; i < n; ++i)
      if (nearest(i) > nearest(next))
        next = i;
    chosen.push_back(next);
    nearest = nearest.cwiseMin(d.col(next));
  }
  return chosen;
}

Solution covering_radius(const Eigen::MatrixXd &distances, Index m, SolveMode mode, const SolverLimits &limits)
{
  require_points(distances, "covering_radius");
  if (m < 1)
    throw PreconditionError("covering_radius: m must be at least 1");
  return dispatch(
      mode, [&] { return cover_exact(distances, m, limits); }, [&] { return cover_greedy(distances, m); });
}

Solution separation_number(const Eigen::MatrixXd &distances, Index m, SolveMode mode, const SolverLimits &limits)
{
  require_points(distances, "separation_number");
  if (m < 2 || m > distances.rows())
    throw PreconditionError("separation_number: need 2 <= m <= number of points");
  return dispatch(
      mode, [&] { return separation_exact(distances, m, limits); },
      [&] { return separation_greedy(distances, m); });
}

Solution partition_diameter(const Eigen::MatrixXd &distances, Index m, SolveMode mode, const SolverLimits &limits)
{
  require_points(distances, "partition_diameter");
  if (m < 1)
    throw PreconditionError("partition_diameter: m must be at least 1");
  return dispatch(
      mode, [&] { return partition_exact(distances, m, limits); },
      [&] { return partition_greedy(distances, m); });
}

const char *to_string(SolveMode mode)
{
  switch (mode) {
  case SolveMode::exact:
    return "exact";
  case SolveMode::greedy:
    return "greedy";
  case SolveMode::automatic:
    return "auto";
  }
  return "?";
}

SolveMode solve_mode_from_string(const std::string &name)
{
  if (name == "exact")
    return SolveMode::exact;
  if (name == "greedy")
    return SolveMode::greedy;
  if (name == "auto")
    return SolveMode::automatic;
  throw PreconditionError("unknown solve mode '" + name + "'");
}

} // namespace hmnc
