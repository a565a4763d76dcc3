#include "hmnc/harness.hpp"
#include "hmnc/oracle.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace hmnc::harness {

unsigned worker_count()
{
  if (const char *env = std::getenv("HMNC_WORKERS")) {
    char *end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<unsigned>(std::min<unsigned long>(v, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &task)
{
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

namespace {

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

std::string csv(std::span<const CsvRow> rows)
{
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

struct Bracket {
  MncReport report;
  std::optional<CertificateCheck> certificate_check;
};

// Bracket of a sampled set under the scenario's pair generators. Witness
// generators are resolved against this set.
Bracket bracket_for(const Scenario &s, const SampledSet &e, const std::string &label)
{
  auto pairs = build_pairs(s, derive_seed(s.seed, 7));
  auto profile = lambda_profile(e, s.n_max);
  const double lambda = *std::min_element(profile.begin(), profile.end());

  std::optional<WitnessCertificate> cert;
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const auto &p = s.pairs[i];
    if (p.kind != PairSpec::Kind::witness)
      continue;
    if (!(p.epsilon < lambda))
      throw ConfigError("/pairs/" + std::to_string(i) + "/epsilon",
                        "epsilon " + format_real(p.epsilon) + " is not below lambda " + format_real(lambda) + " of " +
                            label);
    auto c = build_witness_system(e.points(), profile, p.epsilon);
    pairs.push_back(c.pair);
    if (!cert || c.guaranteed_bound > cert->guaranteed_bound)
      cert = std::move(c);
  }
  Bracket b{mnc_bracket(e, pairs, s.n_max, s.m_range, cert ? &*cert : nullptr), std::nullopt};
  if (!b.report.bracket_holds(1e-8))
    throw InternalError("bracket violation for " + label + ": lower " + format_real(b.report.chi_lower) +
                        " > upper " + format_real(b.report.chi_upper));
  return b;
}

Json scenario_header(const Scenario &s, const char *command)
{
  return Json{{"command", command},
              {"scenario", s.name},
              {"seed", s.seed},
              {"algebra", shape_to_json(s.shape)},
              {"truncation", s.truncation},
              {"n_max", s.n_max}};
}

} // namespace

std::vector<OutputFile> measure_scenario(const Scenario &s, unsigned workers)
{
  if (s.sets.empty() && s.operators.empty())
    throw ConfigError("", "measure needs at least one set or operator descriptor");

  struct Result {
    std::vector<OutputFile> files;
    Json summary;
  };
  const std::size_t ns = s.sets.size(), no = s.operators.size();
  std::vector<Result> results(ns + no);

  parallel_for(ns + no, workers, [&](std::size_t i) {
    Result &r = results[i];
    if (i < ns) {
      const auto &spec = s.sets[i];
      SampledSet e = build_set(s, spec, derive_seed(s.seed, 100 + i));
      auto b = bracket_for(s, e, "set " + spec.name);
      Json j{{"descriptor", "set"},
             {"name", spec.name},
             {"kind", to_string(spec.kind)},
             {"points", e.points().size()},
             {"membership_defect", real_to_json(e.membership_defect())},
             {"report", report_to_json(b.report)}};
      r.files.push_back({"set_" + spec.name + ".json", dump(j)});
      r.files.push_back({"set_" + spec.name + ".csv", csv(profile_rows(b.report))});
      r.summary = Json{{"descriptor", "set"},
                       {"name", spec.name},
                       {"lambda", real_to_json(b.report.lambda_value)},
                       {"chi_lower", real_to_json(b.report.chi_lower)},
                       {"chi_upper", real_to_json(b.report.chi_upper)}};
    } else {
      const auto &spec = s.operators[i - ns];
      auto profile = lambda_op_profile(spec.op, s.n_max);
      const double lambda = *std::min_element(profile.begin(), profile.end());
      auto image = image_ball_sampler(spec.op, 8, derive_seed(s.seed, 200 + i));
      auto b = bracket_for(s, image, "operator " + spec.name);
      auto level = vanishing_level(spec.op);
      Json j{{"descriptor", "operator"},
             {"name", spec.name},
             {"kind", to_string(spec.op.kind())},
             {"norm", real_to_json(op_norm(spec.op))},
             {"lambda_profile", Json::array()},
             {"lambda_value", real_to_json(lambda)},
             {"vanishing_level", level ? Json(*level) : Json(nullptr)},
             {"image", report_to_json(b.report)}};
      for (double v : profile)
        j["lambda_profile"].push_back(real_to_json(v));
      auto rows = profile_rows(profile, "lambda_op");
      auto image_rows = profile_rows(b.report);
      for (auto &row : image_rows)
        row.quantity = "image_" + row.quantity;
      rows.insert(rows.end(), image_rows.begin(), image_rows.end());
      r.files.push_back({"operator_" + spec.name + ".json", dump(j)});
      r.files.push_back({"operator_" + spec.name + ".csv", csv(rows)});
      r.summary = Json{{"descriptor", "operator"},
                       {"name", spec.name},
                       {"lambda", real_to_json(lambda)},
                       {"norm", real_to_json(op_norm(spec.op))}};
    }
  });

  std::vector<OutputFile> files;
  Json summary = scenario_header(s, "measure");
  summary["descriptors"] = Json::array();
  for (auto &r : results) {
    for (auto &f : r.files)
      files.push_back(std::move(f));
    summary["descriptors"].push_back(std::move(r.summary));
  }
  files.push_back({"measure.json", dump(summary)});
  return files;
}

WitnessRun witness_scenario(const Scenario &s, bool audit_oracle)
{
  if (!s.witness)
    throw ConfigError("/witness", "the witness command needs a 'witness' section");
  const auto &w = *s.witness;
  std::size_t index = 0;
  while (s.sets[index].name != w.set)
    ++index;
  SampledSet e = build_set(s, s.sets[index], derive_seed(s.seed, 100 + index));
  auto profile = lambda_profile(e, s.n_max);
  const double lambda = *std::min_element(profile.begin(), profile.end());
  if (!(w.epsilon < lambda))
    throw ConfigError("/witness/epsilon",
                      "epsilon " + format_real(w.epsilon) + " is not below lambda " + format_real(lambda));

  WitnessCertificate cert = [&] {
    try {
      return build_witness_system(e.points(), profile, w.epsilon, {w.count});
    } catch (const SamplerExhausted &x) {
      throw VerifiedFailure("no sample reaches lambda - epsilon/4 = " + format_real(x.target()) + " at level " +
                            std::to_string(x.level()) + "; best achieved " + format_real(x.best()));
    } catch (const TruncationTooSmall &x) {
      throw VerifiedFailure("found " + std::to_string(x.found()) + " witnesses, " + std::to_string(x.required()) +
                            " required; estimated truncation needed " + std::to_string(x.minimal_truncation()));
    }
  }();
  auto check = validate_certificate(cert);

  WitnessRun run;
  run.valid = check.valid;
  Json validation = scenario_header(s, "witness");
  validation["set"] = w.set;
  validation["lambda"] = real_to_json(lambda);
  validation["epsilon"] = real_to_json(w.epsilon);
  validation["guaranteed_bound"] = real_to_json(cert.guaranteed_bound);
  validation["witnesses"] = cert.size();
  validation["check"] = check_to_json(check);

  if (audit_oracle) {
    const oracle::OracleBudget budget;
    Json audit{{"seminorm_deviation", nullptr}, {"radii", Json::array()}, {"passed", true}};
    if (cert.size() <= 64) {
      auto d = distance_matrix(cert.pair, cert.witnesses);
      double worst = 0;
      for (Index i = 0; i < cert.size(); ++i)
        for (Index j = i + 1; j < cert.size(); ++j) {
          auto diff = cert.witnesses[static_cast<std::size_t>(i)] - cert.witnesses[static_cast<std::size_t>(j)];
          worst = std::max(worst, std::abs(oracle::seminorm_reference(cert.pair, diff) - d(i, j)));
        }
      audit["seminorm_deviation"] = real_to_json(worst);
      bool ok = worst <= 1e-12;
      for (const auto &[m, r] : check.radii) {
        if (!oracle::cover_in_budget(cert.size(), m, budget))
          continue;
        double ref = oracle::exact_cover_radius(d, m, budget);
        audit["radii"].push_back({{"m", m}, {"solver", real_to_json(r)}, {"oracle", real_to_json(ref)}});
        ok = ok && ref == r;
      }
      audit["passed"] = ok;
      run.valid = run.valid && ok;
    }
    validation["audit"] = std::move(audit);
  }
  validation["valid"] = run.valid;

  run.files.push_back({"certificate.json", dump(certificate_to_json(cert))});
  run.files.push_back({"validation.json", dump(validation)});
  run.summary = std::to_string(cert.size()) + " witnesses, bound " + format_real(cert.guaranteed_bound) +
                (run.valid ? ", valid" : ", INVALID");
  if (!check.failures.empty()) {
    run.summary += " (";
    for (std::size_t i = 0; i < check.failures.size(); ++i)
      run.summary += (i ? ", " : "") + check.failures[i];
    run.summary += ")";
  }
  return run;
}

namespace {

void write_files(const std::filesystem::path &dir, const std::vector<OutputFile> &files)
{
  std::filesystem::create_directories(dir);
  for (const auto &f : files) {
    std::ofstream out(dir / f.name, std::ios::binary | std::ios::trunc);
    out << f.content;
    if (!out)
      throw std::runtime_error("cannot write " + (dir / f.name).string());
  }
}

} // namespace

int run(const RunOptions &options, std::ostream &out, std::ostream &err)
{
  try {
    Scenario s = load_scenario(options.config);
    if (options.seed)
      s.seed = *options.seed;
    const unsigned workers = options.workers ? options.workers : worker_count();

    if (options.command == "verify") {
      auto report = verify_scenario(s, options.audit_oracle, workers);
      write_files(options.out, {{"verify.json", dump(verify_report_json(s, report))}});
      for (const auto &inv : report.invariants)
        out << (inv.passed ? "PASS " : "FAIL ") << inv.name << "  margin " << format_real(inv.worst_margin)
            << (inv.detail.empty() || inv.passed ? "" : "  (" + inv.detail + ")") << "\n";
      return report.passed() ? exit_pass : exit_failure;
    }
    if (options.command == "measure") {
      auto files = measure_scenario(s, workers);
      write_files(options.out, files);
      for (const auto &f : files)
        out << "wrote " << (options.out / f.name).string() << "\n";
      return exit_pass;
    }
    if (options.command == "witness") {
      auto result = witness_scenario(s, options.audit_oracle);
      write_files(options.out, result.files);
      out << result.summary << "\n";
      return result.valid ? exit_pass : exit_failure;
    }
    err << "error: unknown command '" << options.command << "'\n";
    return exit_config;
  } catch (const ConfigError &e) {
    err << "config error at " << e.what() << "\n";
    return exit_config;
  } catch (const FormatError &e) {
    err << "config error at " << e.what() << "\n";
    return exit_config;
  } catch (const VerifiedFailure &e) {
    err << "failure: " << e.what() << "\n";
    return exit_failure;
  } catch (const NumericalError &e) {
    err << "failure: " << e.what() << "\n";
    return exit_failure;
  } catch (const InternalError &e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

} // namespace hmnc::harness
