#include "hmnc/setmnc.hpp"

#include <algorithm>
#include <cmath>

namespace hmnc {

namespace {

void sample_generator(const AdjointableOperator &g, double radius, Index count, std::uint64_t seed,
                      std::vector<ModuleVector> &preimages, std::vector<ModuleVector> &points)
{
  for (Index n = 0; n < g.truncation(); ++n)
    if (auto w = tail_maximizer(g, n))
      preimages.push_back(std::move(*w));
  Rng rng(seed);
  for (Index i = 0; i < count; ++i)
    preimages.push_back(random_vector_on_sphere<cplx>(g.shape(), g.truncation(), rng));
  for (const auto &w : preimages)
    points.push_back(radius * op_apply(g, w));
}

// ‖(I − Q) G‖ with Q given per block.
double residual_norm(const AdjointableOperator &g, const Projection &q)
{
  auto qs = q.dense(g.shape(), g.truncation());
  double norm = 0;
  for (Index k = 0; k < g.shape().blocks(); ++k)
    norm = std::max(norm, spectral_norm(g.block(k) - qs[static_cast<std::size_t>(k)] * g.block(k)));
  return norm;
}

void require_pair_fits(const SampledSet &e, const AdmissiblePair &pair)
{
  require_same_shape(e.shape(), pair.shape(), "admissible pair");
  if (e.truncation() != pair.truncation())
    throw ShapeError("admissible pair truncation does not match the set");
}

} // namespace

SampledSet SampledSet::finite_list(std::vector<ModuleVector> points)
{
  if (points.empty())
    throw PreconditionError("finite list needs at least one point");
  for (const auto &x : points)
    x.require_compatible(points.front(), "finite list");
  SampledSet s;
  s.kind_ = SetKind::finite_list;
  s.shape_ = points.front().shape();
  s.n_ = points.front().truncation();
  s.points_ = std::move(points);
  return s;
}

SampledSet SampledSet::ball(const Projection &q, const AlgebraShape &shape, Index truncation, double radius,
                            Index count, std::uint64_t seed)
{
  if (!(radius >= 0))
    throw PreconditionError("ball radius must be nonnegative");
  SampledSet s;
  s.kind_ = SetKind::ball;
  s.shape_ = shape;
  s.n_ = truncation;
  s.radius_ = radius;
  s.seed_ = seed;
  s.generator_ = projection_operator(q, shape, truncation);
  sample_generator(*s.generator_, radius, count, seed, s.preimages_, s.points_);
  return s;
}

SampledSet SampledSet::image(AdjointableOperator t, double radius, Index count, std::uint64_t seed)
{
  if (!(radius >= 0))
    throw PreconditionError("image radius must be nonnegative");
  SampledSet s;
  s.kind_ = SetKind::image;
  s.shape_ = t.shape();
  s.n_ = t.truncation();
  s.radius_ = radius;
  s.seed_ = seed;
  s.generator_ = std::move(t);
  sample_generator(*s.generator_, radius, count, seed, s.preimages_, s.points_);
  return s;
}

double SampledSet::norm_bound() const
{
  if (kind_ == SetKind::finite_list) {
    double best = 0;
    for (const auto &x : points_)
      best = std::max(best, vec_norm(x));
    return best;
  }
  return radius_ * op_norm(*generator_);
}

double SampledSet::membership_defect() const
{
  if (kind_ == SetKind::finite_list)
    return 0;
  double defect = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto &x = points_[i];
    defect = std::max(defect, vec_norm(preimages_[i]) - 1);
    defect = std::max(defect, vec_norm(x - radius_ * op_apply(*generator_, preimages_[i])));
    if (kind_ == SetKind::ball) {
      defect = std::max(defect, vec_norm(x) - radius_);
      defect = std::max(defect, vec_norm(x - op_apply(*generator_, x)));
    }
  }
  return std::max(defect, 0.0);
}

std::optional<ModuleVector> tail_maximizer(const AdjointableOperator &t, Index n)
{
  auto tail_op = tail_operator(t, n);
  Index block = -1;
  double best = 0;
  for (Index k = 0; k < t.shape().blocks(); ++k) {
    double s = spectral_norm(tail_op.block(k));
    if (s > best) {
      best = s;
      block = k;
    }
  }
  if (block < 0)
    return std::nullopt;

  const CMatrix &a = tail_op.block(block);
  CMatrix gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<Index> cols;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) >= top * (1 - 1e-10))
      cols.push_back(i);
  CMatrix u(gram.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    u.col(static_cast<Index>(c)) = es.eigenvectors().col(cols[c]);

  // Project canonical vectors onto the top eigenspace; the first one that
  // survives fixes a deterministic representative.
  CVector v;
  for (Index c = 0; c < gram.rows(); ++c) {
    CVector p = u * u.row(c).adjoint();
    if (p.norm() > 1e-6) {
      v = p / p.norm();
      break;
    }
  }
  ModuleVector w = ModuleVector::zero(t.shape(), t.truncation());
  w.stack(block).col(0) = v;
  return w;
}

std::vector<double> lambda_profile(const SampledSet &e, Index n_max)
{
  if (n_max < 0 || n_max > e.truncation())
    throw PreconditionError("lambda_profile: n_max " + std::to_string(n_max) + " outside [0, " +
                            std::to_string(e.truncation()) + "]");
  std::vector<double> s;
  for (Index n = 0; n <= n_max; ++n) {
    if (e.kind() == SetKind::finite_list) {
      double best = 0;
      for (const auto &x : e.points())
        best = std::max(best, vec_norm(tail(x, n)));
      s.push_back(best);
    } else {
      s.push_back(e.radius() * op_norm(tail_operator(e.generator(), n)));
    }
  }
  return s;
}

double sup_distance(const SampledSet &e, const Projection &q)
{
  if (e.kind() == SetKind::finite_list) {
    double best = 0;
    for (const auto &x : e.points())
      best = std::max(best, distance_to_range(q, x));
    return best;
  }
  if (q.is_head())
    return e.radius() * op_norm(tail_operator(e.generator(), q.head_index()));
  return e.radius() * residual_norm(e.generator(), q);
}

double lambda_via_projection_family(const SampledSet &e, std::span<const Projection> family)
{
  if (family.empty())
    throw PreconditionError("lambda_via_projection_family: empty family");
  double best = std::numeric_limits<double>::infinity();
  for (const auto &q : family)
    best = std::min(best, sup_distance(e, q));
  return best;
}

MncReport mnc_bracket(const SampledSet &e, std::span<const AdmissiblePair> pairs, Index n_max, MRange m_range,
                      const WitnessCertificate *certificate, SolveMode mode)
{
  if (pairs.empty())
    throw PreconditionError("mnc_bracket: empty pair family");
  if (m_range.lo < 1 || m_range.hi < m_range.lo)
    throw PreconditionError("mnc_bracket: m range must satisfy 1 <= lo <= hi");
  for (const auto &p : pairs)
    require_pair_fits(e, p);

  MncReport report;
  report.n_max = n_max;
  report.lambda_profile = lambda_profile(e, n_max);
  report.lambda_value = *std::min_element(report.lambda_profile.begin(), report.lambda_profile.end());
  report.chi_upper = report.lambda_value;
  report.norm_bound = e.norm_bound();

  std::vector<ModuleVector> tails;
  for (const auto &x : e.points())
    tails.push_back(tail(x, n_max));
  const Index count = static_cast<Index>(tails.size());

  auto merge = [](std::vector<ProfilePoint> &profile, Index m, const Solution &s) {
    auto it = std::find_if(profile.begin(), profile.end(), [m](const ProfilePoint &p) { return p.m == m; });
    if (it == profile.end()) {
      profile.push_back({m, s.value, s.exact});
    } else if (s.value > it->value) {
      it->value = s.value;
      it->exact = s.exact;
    }
  };

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto d = distance_matrix(pairs[p], tails);
    for (Index m = m_range.lo; m <= m_range.hi; ++m) {
      merge(report.covering_surrogate, m, covering_radius(d, m, mode));
      merge(report.alpha_surrogate, m, partition_diameter(d, m, mode));
      if (m + 1 > count)
        continue;
      auto sep = separation_number(d, m + 1, mode);
      merge(report.separation_surrogate, m + 1, sep);
      if (sep.value / 2 > report.chi_lower) {
        report.chi_lower = sep.value / 2;
        report.attaining_pair = static_cast<Index>(p);
        report.attaining_m = m;
        report.lower_source = "separation";
      }
    }
  }

  if (certificate) {
    if (std::abs(certificate->lambda_value - report.lambda_value) > 1e-12 * std::max(1.0, report.lambda_value))
      throw PreconditionError("mnc_bracket: certificate was built for a different lambda");
    auto check = validate_certificate(*certificate);
    report.certificate = CertificateSummary{certificate->epsilon, certificate->guaranteed_bound, certificate->size(),
                                            check.valid, check.radius_margin};
    if (check.valid && certificate->guaranteed_bound > report.chi_lower) {
      report.chi_lower = certificate->guaranteed_bound;
      report.attaining_pair.reset();
      report.attaining_m.reset();
      report.lower_source = "certificate";
    }
  }
  return report;
}

ComplementedReport complemented_lambda_check(const SampledSet &e, const Projection &q, Index n_max, double tol)
{
  if (n_max < 0 || n_max >= e.truncation())
    throw PreconditionError("complemented_lambda_check: need 0 <= n_max < N");
  double outside = sup_distance(e, q);
  if (outside > tol)
    throw PreconditionError("complemented_lambda_check: set is not inside ran Q (distance " +
                            std::to_string(outside) + ")");
  auto qs = q.dense(e.shape(), e.truncation());

  ComplementedReport report;
  report.n_max = n_max;
  report.ambient_profile = lambda_profile(e, n_max);
  std::vector<Projection> family;
  for (Index n = 0; n <= n_max; ++n) {
    std::vector<CMatrix> range;
    for (Index k = 0; k < e.shape().blocks(); ++k) {
      const CMatrix &qk = qs[static_cast<std::size_t>(k)];
      if (n == 0)
        range.push_back(CMatrix::Zero(qk.rows(), 1));
      else
        range.push_back(qk.leftCols(n * e.shape().dim(k)));
    }
    auto r = Projection::onto_range(e.shape(), e.truncation(), range);
    report.transported_profile.push_back(sup_distance(e, r));
    family.push_back(std::move(r));
  }
  report.lambda_submodule =
      *std::min_element(report.transported_profile.begin(), report.transported_profile.end());
  for (Index n = 0; n <= n_max; ++n)
    family.push_back(Projection::head(n));
  report.lambda_ambient = lambda_via_projection_family(e, family);

  report.pointwise_slack = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < report.ambient_profile.size(); ++n)
    report.pointwise_slack =
        std::min(report.pointwise_slack, report.ambient_profile[n] - report.transported_profile[n]);
  report.holds = report.pointwise_slack >= -tol && std::abs(report.lambda_submodule - report.lambda_ambient) <= tol;
  return report;
}

AdmissiblePair embed_pair(const DirectSumContext &ctx, Summand side, const AdmissiblePair &pair)
{
  std::vector<ModuleVector> xs;
  for (const auto &x : pair.system())
    xs.push_back(direct_sum_embed(ctx, side, x));
  return AdmissiblePair(std::move(xs), pair.states());
}

AdmissiblePair restrict_pair(const DirectSumContext &ctx, Summand side, const AdmissiblePair &pair)
{
  std::vector<ModuleVector> xs;
  for (const auto &x : pair.system())
    xs.push_back(direct_sum_part(ctx, side, x));
  return AdmissiblePair(std::move(xs), pair.states());
}

DirectSumReport direct_sum_chi_check(const DirectSumContext &ctx, const SampledSet &e, const AdmissiblePair &first,
                                     const AdmissiblePair &second, const AdmissiblePair &sum, MRange m_range,
                                     double tol, SolveMode mode)
{
  if (e.truncation() != ctx.total())
    throw ShapeError("direct_sum_chi_check: set truncation does not match the direct sum");
  if (first.truncation() != ctx.left() || second.truncation() != ctx.right() || sum.truncation() != ctx.total())
    throw ShapeError("direct_sum_chi_check: pair truncations do not match the direct sum");

  const auto &pts = e.points();
  std::vector<ModuleVector> part1, part2;
  for (const auto &y : pts) {
    part1.push_back(direct_sum_part(ctx, Summand::first, y));
    part2.push_back(direct_sum_part(ctx, Summand::second, y));
  }
  auto lifted1 = embed_pair(ctx, Summand::first, first);
  auto lifted2 = embed_pair(ctx, Summand::second, second);
  auto sum1 = restrict_pair(ctx, Summand::first, sum);
  auto sum2 = restrict_pair(ctx, Summand::second, sum);

  DirectSumReport report;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    report.identity_defect = std::max(
        {report.identity_defect, std::abs(seminorm_eval(lifted1, pts[i]) - seminorm_eval(first, part1[i])),
         std::abs(seminorm_eval(lifted2, pts[i]) - seminorm_eval(second, part2[i])),
         std::abs(seminorm_eval(sum, direct_sum_embed(ctx, Summand::first, part1[i])) -
                  seminorm_eval(sum1, part1[i])),
         std::abs(seminorm_eval(sum, direct_sum_embed(ctx, Summand::second, part2[i])) -
                  seminorm_eval(sum2, part2[i]))});
  }

  auto d_part1 = distance_matrix(first, part1);
  auto d_part2 = distance_matrix(second, part2);
  auto d_lift1 = distance_matrix(lifted1, pts);
  auto d_lift2 = distance_matrix(lifted2, pts);
  auto d_sum1 = distance_matrix(sum1, part1);
  auto d_sum2 = distance_matrix(sum2, part2);

  for (Index m = m_range.lo; m <= m_range.hi; ++m) {
    report.entries.push_back({"left_first", m, 0, covering_radius(d_part1, m, mode).value,
                              covering_radius(d_lift1, m, mode).value});
    report.entries.push_back({"left_second", 0, m, covering_radius(d_part2, m, mode).value,
                              covering_radius(d_lift2, m, mode).value});
  }
  for (Index m1 = m_range.lo; m1 <= m_range.hi; ++m1) {
    auto c1 = covering_radius(d_sum1, m1, mode);
    for (Index m2 = m_range.lo; m2 <= m_range.hi; ++m2) {
      auto c2 = covering_radius(d_sum2, m2, mode);
      std::vector<ModuleVector> net;
      for (Index a : c1.points)
        for (Index b : c2.points)
          net.push_back(direct_sum_embed(ctx, Summand::first, part1[static_cast<std::size_t>(a)]) +
                        direct_sum_embed(ctx, Summand::second, part2[static_cast<std::size_t>(b)]));
      double radius = 0;
      for (const auto &y : pts) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto &c : net)
          nearest = std::min(nearest, pseudometric(sum, y, c));
        radius = std::max(radius, nearest);
      }
      report.entries.push_back({"right", m1, m2, radius, c1.value + c2.value});
    }
  }

  report.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto &entry : report.entries)
    report.worst_slack = std::min(report.worst_slack, entry.rhs - entry.lhs);
  report.holds = report.worst_slack >= -tol && report.identity_defect <= tol;
  return report;
}

const char *to_string(SetKind kind)
{
  switch (kind) {
  case SetKind::finite_list:
    return "list";
  case SetKind::ball:
    return "ball";
  case SetKind::image:
    return "image";
  }
  return "?";
}

} // namespace hmnc
