#include "hmnc/harness.hpp"
#include "hmnc/oracle.hpp"

#include <limits>

namespace hmnc::harness {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Collects margins (tolerance − violation) for one named invariant.
class Tally {
public:
  explicit Tally(std::string name) { inv_.name = std::move(name); inv_.worst_margin = inf; }

  void margin(double m, const std::string &where = {})
  {
    if (std::isnan(m))
      m = -inf;
    if (m < inv_.worst_margin) {
      inv_.worst_margin = m;
      if (m < 0)
        inv_.detail = where;
    }
    inv_.passed = inv_.passed && m >= 0;
  }

  void fail(const std::string &why)
  {
    inv_.passed = false;
    inv_.worst_margin = -inf;
    inv_.detail = why;
  }

  Invariant done() { return std::move(inv_); }

private:
  Invariant inv_;
};

using Suite = std::function<std::vector<Invariant>()>;

Index pair_size(const Scenario &s) { return std::min<Index>(s.truncation, 5); }

void global_suites(const Scenario &s, std::vector<Suite> &out)
{
  const AlgebraShape shape = s.shape;
  const Index n = s.truncation;
  const Index count = s.samples;

  out.push_back([=, &s] {
    Rng rng(derive_seed(s.seed, 1));
    Tally t("algebra.c_star_identity");
    for (Index i = 0; i < count; ++i) {
      auto a = random_element<cplx>(shape, rng);
      double norm = alg_norm(a);
      t.margin(1e-10 * std::max(1.0, norm * norm) - std::abs(alg_norm(alg_adjoint(a) * a) - norm * norm),
               "sample " + std::to_string(i));
    }
    return std::vector<Invariant>{t.done()};
  });

  out.push_back([=, &s] {
    Rng rng(derive_seed(s.seed, 2));
    Tally t("algebra.norming_state");
    for (Index i = 0; i < count; ++i) {
      auto a = random_normal<cplx>(shape, rng);
      auto phi = norming_state(a, s.tolerances.normality);
      t.margin(std::abs(phi(a)) - (alg_norm(a) - 1e-9), "sample " + std::to_string(i));
    }
    return std::vector<Invariant>{t.done()};
  });

  out.push_back([=, &s] {
    Rng rng(derive_seed(s.seed, 3));
    Tally pos("module.inner_product_positive"), lin("module.inner_product_right_linear");
    for (Index i = 0; i < count; ++i) {
      auto x = random_vector<cplx>(shape, n, rng);
      auto y = random_vector<cplx>(shape, n, rng);
      auto a = random_element<cplx>(shape, rng);
      pos.margin(min_eigenvalue(inner(x, x)) + s.tolerances.psd, "sample " + std::to_string(i));
      double scale = std::max(1.0, vec_norm(x) * vec_norm(y) * alg_norm(a));
      lin.margin(1e-12 * scale - alg_norm(inner(x, right_mul(y, a)) - inner(x, y) * a), "sample " + std::to_string(i));
    }
    return std::vector<Invariant>{pos.done(), lin.done()};
  });

  out.push_back([=, &s] {
    Rng rng(derive_seed(s.seed, 4));
    Tally dom("seminorm.domination"), uni("seminorm.unitary_invariance");
    for (Index i = 0; i < count; ++i) {
      auto pair = random_admissible_pair(shape, n, pair_size(s), rng);
      auto x = random_vector<cplx>(shape, n, rng);
      dom.margin(vec_norm(x) + 1e-10 - seminorm_eval(pair, x), "sample " + std::to_string(i));
      auto u = random_unitary<cplx>(shape, rng());
      uni.margin(1e-10 - std::abs(seminorm_eval(pair, right_mul(x, u)) -
                                  seminorm_eval(transform_unitary(pair, u), x)),
                 "sample " + std::to_string(i));
    }
    return std::vector<Invariant>{dom.done(), uni.done()};
  });

  out.push_back([=, &s] {
    Rng rng(derive_seed(s.seed, 5));
    Tally t("seminorm.blocked_admissible");
    for (Index i = 0; i < count; ++i) {
      auto pair = random_blocked_pair(shape, n, rng);
      std::vector<ModuleVector> samples;
      for (Index k = 0; k < count; ++k)
        samples.push_back(random_vector<cplx>(shape, n, rng));
      auto report = check_admissible(pair.system(), samples);
      t.margin(report.worst_eigenvalue + 1e-9, "system " + std::to_string(i));
    }
    return std::vector<Invariant>{t.done()};
  });

  out.push_back([=, &s] {
    Tally t("lambda.unit_ball");
    auto ball = SampledSet::ball(Projection::head(n), shape, n, 1.0, 0, derive_seed(s.seed, 6));
    auto profile = lambda_profile(ball, n);
    for (Index k = 0; k < n; ++k)
      t.margin(1e-10 - std::abs(profile[static_cast<std::size_t>(k)] - 1.0), "n = " + std::to_string(k));
    t.margin(-std::abs(profile.back()), "n = N");
    return std::vector<Invariant>{t.done()};
  });
}

void set_suites(const Scenario &s, std::vector<Suite> &out)
{
  for (std::size_t i = 0; i < s.sets.size(); ++i) {
    out.push_back([&s, i] {
      const SetSpec &spec = s.sets[i];
      std::vector<Invariant> result;
      const std::string prefix = "set." + spec.name + ".";
      if (spec.kind == SetKind::ball && spec.projection.kind == ProjectionSpec::Kind::matrix) {
        auto d = Projection::defects(spec.projection.blocks);
        Tally sa("projection." + spec.name + ".self_adjoint"), id("projection." + spec.name + ".idempotent");
        sa.margin(s.tolerances.projection - d.self_adjoint, "‖Q − Q*‖ = " + format_real(d.self_adjoint));
        id.margin(s.tolerances.projection - d.idempotent, "‖Q² − Q‖ = " + format_real(d.idempotent));
        result.push_back(sa.done());
        result.push_back(id.done());
        if (!result[0].passed || !result[1].passed)
          return result;
      }
      SampledSet e = build_set(s, spec, derive_seed(s.seed, 100 + i));
      Tally member(prefix + "membership"), mono(prefix + "lambda_monotone"), bound(prefix + "lambda_norm_bound"),
          bracket(prefix + "bracket");
      member.margin(1e-10 - e.membership_defect());
      auto profile = lambda_profile(e, s.n_max);
      for (std::size_t k = 0; k + 1 < profile.size(); ++k)
        mono.margin(profile[k] - profile[k + 1], "n = " + std::to_string(k));
      bound.margin(e.norm_bound() + 1e-10 - profile.front());
      auto pairs = build_pairs(s, derive_seed(s.seed, 7));
      if (!pairs.empty()) {
        auto report = mnc_bracket(e, pairs, s.n_max, s.m_range);
        bracket.margin(report.chi_upper + 1e-8 - report.chi_lower);
      }
      for (auto *t : {&member, &mono, &bound, &bracket})
        result.push_back(t->done());
      return result;
    });
  }
}

void operator_suites(const Scenario &s, std::vector<Suite> &out)
{
  for (std::size_t i = 0; i < s.operators.size(); ++i) {
    out.push_back([&s, i] {
      const auto &spec = s.operators[i];
      const auto &t = spec.op;
      const std::string prefix = "operator." + spec.name + ".";
      Rng rng(derive_seed(s.seed, 200 + i));
      Tally adj(prefix + "adjoint_identity"), norm(prefix + "lambda_le_norm"), sub(prefix + "subadditive"),
          hom(prefix + "homogeneous"), pert(prefix + "compact_perturbation");
      auto t_star = op_adjoint(t);
      for (Index k = 0; k < s.samples; ++k) {
        auto x = random_vector<cplx>(s.shape, s.truncation, rng);
        auto y = random_vector<cplx>(s.shape, s.truncation, rng);
        adj.margin(1e-10 - alg_norm(inner(op_apply(t, x), y) - inner(x, op_apply(t_star, y))),
                   "sample " + std::to_string(k));
      }
      auto profile = lambda_op_profile(t, s.truncation);
      norm.margin(op_norm(t) + 1e-10 - *std::max_element(profile.begin(), profile.end()));

      const Index level = std::min<Index>(1, s.n_max);
      std::vector<ModuleVector> ys, zs;
      for (int k = 0; k < 2; ++k) {
        ys.push_back(head(random_vector<cplx>(s.shape, s.truncation, rng), level));
        zs.push_back(random_vector<cplx>(s.shape, s.truncation, rng));
      }
      auto other = AdjointableOperator::random(s.shape, s.truncation, rng);
      auto r = operator_property_suite(t, other, AdjointableOperator::theta(ys, zs), 2.0, s.n_max);
      sub.margin(r.subadditivity_slack + 1e-9);
      hom.margin(1e-10 - r.homogeneity_defect);
      pert.margin(1e-12 - r.perturbation_defect);
      return std::vector<Invariant>{adj.done(), norm.done(), sub.done(), hom.done(), pert.done()};
    });
  }
}

void oracle_suites(const Scenario &s, std::vector<Suite> &out)
{
  out.push_back([&s] {
    Rng rng(derive_seed(s.seed, 300));
    Tally cover("oracle.covering_radius"), part("oracle.partition_diameter"), sep("oracle.separation_number");
    for (Index i = 0; i < s.samples; ++i) {
      std::uniform_int_distribution<Index> size(2, 10);
      const Index count = size(rng);
      auto pair = random_admissible_pair(s.shape, s.truncation, pair_size(s), rng);
      std::vector<ModuleVector> pts;
      for (Index k = 0; k < count; ++k)
        pts.push_back(random_vector<cplx>(s.shape, s.truncation, rng));
      auto d = distance_matrix(pair, pts);
      const std::string where = "instance " + std::to_string(i);
      for (Index m = 1; m <= 4; ++m) {
        cover.margin(-std::abs(covering_radius(d, m, SolveMode::exact).value - oracle::exact_cover_radius(d, m)), where);
        part.margin(-std::abs(partition_diameter(d, m, SolveMode::exact).value - oracle::exact_partition_diameter(d, m)),
                    where);
        if (m + 1 <= count && oracle::separation_in_budget(count, m + 1))
          sep.margin(-std::abs(separation_number(d, m + 1, SolveMode::exact).value -
                               oracle::exact_separation_number(d, m + 1)),
                     where);
      }
    }
    return std::vector<Invariant>{cover.done(), part.done(), sep.done()};
  });

  out.push_back([&s] {
    Rng rng(derive_seed(s.seed, 301));
    Tally spec("oracle.spectral_norm"), semi("oracle.seminorm");
    for (Index i = 0; i < s.samples; ++i) {
      const std::string where = "sample " + std::to_string(i);
      CMatrix m = gaussian_matrix<cplx>(6, 6, rng);
      double fast = spectral_norm(m);
      auto ref = oracle::spectral_norm_reference(m, rng());
      if (!ref.converged)
        spec.fail("power iteration did not converge on " + where);
      else
        spec.margin(1e-8 * fast - std::abs(ref.value - fast), where);

      auto pair = random_admissible_pair(s.shape, s.truncation, pair_size(s), rng);
      auto x = random_vector<cplx>(s.shape, s.truncation, rng);
      semi.margin(1e-12 - std::abs(seminorm_eval(pair, x) - oracle::seminorm_reference(pair, x)), where);
    }
    for (const auto &op : s.operators) {
      for (Index k = 0; k < op.op.shape().blocks(); ++k) {
        auto ref = oracle::spectral_norm_reference(op.op.block(k), derive_seed(s.seed, 302));
        double fast = spectral_norm(op.op.block(k));
        if (!ref.converged)
          spec.fail("power iteration did not converge on operator " + op.name);
        else
          spec.margin(1e-8 * std::max(fast, 1e-300) - std::abs(ref.value - fast), "operator " + op.name);
      }
    }
    return std::vector<Invariant>{spec.done(), semi.done()};
  });
}

} // namespace

bool VerifyReport::passed() const
{
  return std::all_of(invariants.begin(), invariants.end(), [](const Invariant &i) { return i.passed; });
}

VerifyReport verify_scenario(const Scenario &s, bool audit_oracle, unsigned workers)
{
  std::vector<Suite> suites;
  global_suites(s, suites);
  set_suites(s, suites);
  operator_suites(s, suites);
  if (audit_oracle)
    oracle_suites(s, suites);

  std::vector<std::vector<Invariant>> results(suites.size());
  parallel_for(suites.size(), workers, [&](std::size_t i) { results[i] = suites[i](); });
  VerifyReport report;
  for (auto &r : results)
    for (auto &inv : r)
      report.invariants.push_back(std::move(inv));
  return report;
}

Json verify_report_json(const Scenario &s, const VerifyReport &report)
{
  Json invariants = Json::array();
  for (const auto &inv : report.invariants) {
    Json j{{"name", inv.name}, {"passed", inv.passed}, {"worst_margin", real_to_json(inv.worst_margin)}};
    if (!inv.detail.empty())
      j["detail"] = inv.detail;
    invariants.push_back(std::move(j));
  }
  return Json{{"command", "verify"},
              {"scenario", s.name},
              {"seed", s.seed},
              {"algebra", shape_to_json(s.shape)},
              {"truncation", s.truncation},
              {"admissibility_samples", {{"distribution", "gaussian"}, {"count", s.samples}}},
              {"passed", report.passed()},
              {"invariants", std::move(invariants)}};
}

} // namespace hmnc::harness
