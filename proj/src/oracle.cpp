#include "hmnc/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace hmnc::oracle {

namespace {

void require_square(const Eigen::MatrixXd &d)
{
  if (d.rows() == 0)
    throw PreconditionError("oracle: empty point list");
  if (d.rows() != d.cols())
    throw ShapeError("oracle: distance matrix must be square");
}

// Calls visit(subset) for every m-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(Index n, Index m, Visit visit)
{
  std::vector<Index> idx(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Index i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i)
      --i;
    if (i < 0)
      return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

} // namespace

bool cover_in_budget(Index points, Index m, const OracleBudget &budget)
{
  return points <= budget.max_points && (m <= budget.max_centers || m >= points);
}

bool separation_in_budget(Index points, Index m, const OracleBudget &budget)
{
  return points <= budget.max_points && m <= budget.max_centers;
}

bool partition_in_budget(Index points, const OracleBudget &budget) { return points <= budget.max_partition_points; }

double exact_cover_radius(const Eigen::MatrixXd &d, Index m, const OracleBudget &budget)
{
  require_square(d);
  const Index n = d.rows();
  if (m < 1)
    throw PreconditionError("exact_cover_radius: m must be at least 1");
  if (!cover_in_budget(n, m, budget))
    throw BudgetExceeded("exact_cover_radius: instance exceeds oracle budget");
  if (m >= n)
    return 0;
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(n, m, [&](const std::vector<Index> &centers) {
    double radius = 0;
    for (Index i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (Index c : centers)
        nearest = std::min(nearest, i == c ? 0.0 : d(i, c));
      radius = std::max(radius, nearest);
    }
    best = std::min(best, radius);
  });
  return best;
}

double exact_separation_number(const Eigen::MatrixXd &d, Index m, const OracleBudget &budget)
{
  require_square(d);
  const Index n = d.rows();
  if (m < 2 || m > n)
    throw PreconditionError("exact_separation_number: need 2 <= m <= number of points");
  if (!separation_in_budget(n, m, budget))
    throw BudgetExceeded("exact_separation_number: instance exceeds oracle budget");
  double best = 0;
  for_each_subset(n, m, [&](const std::vector<Index> &s) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        sep = std::min(sep, d(s[a], s[b]));
    best = std::max(best, sep);
  });
  return best;
}

double exact_partition_diameter(const Eigen::MatrixXd &d, Index m, const OracleBudget &budget)
{
  require_square(d);
  const Index n = d.rows();
  if (m < 1)
    throw PreconditionError("exact_partition_diameter: m must be at least 1");
  if (!partition_in_budget(n, budget))
    throw BudgetExceeded("exact_partition_diameter: instance exceeds oracle budget");

  // Restricted growth strings: label[0] = 0 and label[i] ≤ 1 + max(label[0..i)).
  std::vector<Index> label(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  auto evaluate = [&] {
    double diam = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)])
          diam = std::max(diam, d(i, j));
    best = std::min(best, diam);
  };
  auto recurse = [&](auto &self, Index pos, Index parts) -> void {
    if (pos == n) {
      evaluate();
      return;
    }
    for (Index l = 0; l <= parts && l < m; ++l) {
      label[static_cast<std::size_t>(pos)] = l;
      self(self, pos + 1, std::max(parts, l + 1));
    }
  };
  recurse(recurse, 1, 1);
  return best;
}

SpectralReference spectral_norm_reference(const CMatrix &m, std::uint64_t seed, const OracleBudget &budget)
{
  SpectralReference out;
  if (m.size() == 0 || m.isZero(0)) {
    out.converged = true;
    return out;
  }
  Rng rng(seed);
  bool all_converged = true;
  double best = 0;
  for (int restart = 0; restart < 2; ++restart) {
    CVector v(m.cols());
    for (Index i = 0; i < v.size(); ++i)
      v(i) = gaussian<cplx>(rng);
    v.normalize();
    double mu = 0;
    bool converged = false;
    for (Index it = 0; it < budget.power_iterations; ++it) {
      CVector gv = m.adjoint() * (m * v);
      mu = std::real(v.dot(gv));
      out.iterations = std::max(out.iterations, it + 1);
      double residual = (gv - mu * v).norm();
      if (residual <= budget.tolerance * std::max(mu, std::numeric_limits<double>::min())) {
        converged = true;
        break;
      }
      double len = gv.norm();
      if (len == 0) {
        // v lies in the kernel; the matrix may still be nonzero, so restart.
        break;
      }
      v = gv / len;
    }
    all_converged = all_converged && converged;
    best = std::max(best, std::sqrt(std::max(mu, 0.0)));
  }
  out.value = best;
  out.converged = all_converged;
  return out;
}

double seminorm_reference(const AdmissiblePair &pair, const ModuleVector &x)
{
  const Index len = pair.size();
  if (len > 64)
    throw BudgetExceeded("seminorm_reference: pair length exceeds 64");
  x.require_compatible(pair.vector(0), "seminorm_reference");
  const AlgebraShape &shape = x.shape();

  auto inner_ref = [&](const ModuleVector &a, const ModuleVector &b, Index k) {
    const Index dk = shape.dim(k);
    CMatrix g = CMatrix::Zero(dk, dk);
    for (Index j = 0; j < a.truncation(); ++j) {
      CMatrix aj = a.coord(j).block(k);
      CMatrix bj = b.coord(j).block(k);
      for (Index r = 0; r < dk; ++r)
        for (Index c = 0; c < dk; ++c)
          for (Index t = 0; t < dk; ++t)
            g(r, c) += std::conj(aj(t, r)) * bj(t, c);
    }
    return g;
  };

  double best = 0;
  for (Index k = 0; k < len; ++k) {
    const State &phi = pair.state(k);
    std::vector<double> terms;
    for (Index i = k; i < len; ++i) {
      cplx value = 0;
      for (Index b = 0; b < shape.blocks(); ++b) {
        CMatrix g = inner_ref(x, pair.vector(i), b);
        const CMatrix &rho = phi.density(b);
        for (Index r = 0; r < g.rows(); ++r)
          for (Index c = 0; c < g.cols(); ++c)
            value += rho(c, r) * g(r, c);
      }
      terms.push_back(std::norm(value));
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0;
    for (double t : terms)
      sum += t;
    best = std::max(best, sum);
  }
  return std::sqrt(best);
}

} // namespace hmnc::oracle
