#include "hmnc/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace hmnc {

FormatError::FormatError(std::string path, const std::string &message)
    : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message), path_(std::move(path))
{
}

namespace {

std::string child(const std::string &path, std::size_t i) { return path + "/" + std::to_string(i); }
std::string child(const std::string &path, const char *key) { return path + "/" + key; }

const Json &array_of(const Json &j, const std::string &path, std::size_t size = std::numeric_limits<std::size_t>::max())
{
  if (!j.is_array())
    throw FormatError(path, "expected an array");
  if (size != std::numeric_limits<std::size_t>::max() && j.size() != size)
    throw FormatError(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

bool is_complex_literal(const Json &j)
{
  return j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number());
}

Json profile_to_json(const std::vector<ProfilePoint> &points)
{
  Json out = Json::array();
  for (const auto &p : points)
    out.push_back({{"m", p.m}, {"value", real_to_json(p.value)}, {"exact", p.exact}});
  return out;
}

Json reals_to_json(std::span<const double> v)
{
  Json out = Json::array();
  for (double x : v)
    out.push_back(real_to_json(x));
  return out;
}

template <typename T> Json optional_to_json(const std::optional<T> &v) { return v ? Json(*v) : Json(nullptr); }

} // namespace

void require_object(const Json &j, const std::string &path, std::initializer_list<const char *> allowed,
                    std::initializer_list<const char *> required)
{
  if (!j.is_object())
    throw FormatError(path, "expected an object");
  for (const auto &item : j.items()) {
    bool known = false;
    for (const char *key : allowed)
      known = known || item.key() == key;
    if (!known)
      throw FormatError(path + "/" + item.key(), "unknown key '" + item.key() + "'");
  }
  for (const char *key : required)
    if (!j.contains(key))
      throw FormatError(path, std::string("missing required key '") + key + "'");
}

Json real_to_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double real_from_json(const Json &j, const std::string &path)
{
  if (!j.is_number())
    throw FormatError(path, "expected a number");
  return j.get<double>();
}

Index index_from_json(const Json &j, const std::string &path, Index lo)
{
  if (!j.is_number_integer())
    throw FormatError(path, "expected an integer");
  auto v = j.get<std::int64_t>();
  if (v < lo)
    throw FormatError(path, "expected an integer >= " + std::to_string(lo));
  return static_cast<Index>(v);
}

Json complex_to_json(cplx z) { return Json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

cplx complex_from_json(const Json &j, const std::string &path)
{
  if (j.is_number())
    return cplx(j.get<double>(), 0.0);
  if (!is_complex_literal(j))
    throw FormatError(path, "expected a number or an [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const CMatrix &m)
{
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json &j, const std::string &path, Index rows, Index cols)
{
  array_of(j, path);
  if (rows >= 0 && static_cast<Index>(j.size()) != rows)
    throw FormatError(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  const Index r = static_cast<Index>(j.size());
  const Index c = r ? static_cast<Index>(array_of(j[0], child(path, std::size_t{0})).size()) : 0;
  if (cols >= 0 && c != cols)
    throw FormatError(child(path, std::size_t{0}), "expected " + std::to_string(cols) + " columns, found " + std::to_string(c));
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const auto rp = child(path, static_cast<std::size_t>(i));
    const Json &row = array_of(j[static_cast<std::size_t>(i)], rp, static_cast<std::size_t>(c));
    for (Index k = 0; k < c; ++k)
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], child(rp, static_cast<std::size_t>(k)));
  }
  return m;
}

Json shape_to_json(const AlgebraShape &shape) { return Json(shape.dims()); }

AlgebraShape shape_from_json(const Json &j, const std::string &path)
{
  array_of(j, path);
  if (j.empty())
    throw FormatError(path, "an algebra needs at least one block");
  std::vector<Index> dims;
  for (std::size_t i = 0; i < j.size(); ++i)
    dims.push_back(index_from_json(j[i], child(path, i), 1));
  return AlgebraShape(std::move(dims));
}

Json element_to_json(const Element &a)
{
  Json out = Json::array();
  for (const auto &b : a.blocks())
    out.push_back(matrix_to_json(b));
  return out;
}

Element element_from_json(const Json &j, const AlgebraShape &shape, const std::string &path)
{
  if (is_complex_literal(j))
    return Element::scalar(shape, complex_from_json(j, path));
  array_of(j, path, static_cast<std::size_t>(shape.blocks()));
  std::vector<CMatrix> blocks;
  for (Index k = 0; k < shape.blocks(); ++k)
    blocks.push_back(matrix_from_json(j[static_cast<std::size_t>(k)], child(path, static_cast<std::size_t>(k)),
                                      shape.dim(k), shape.dim(k)));
  return Element(shape, std::move(blocks));
}

Json vector_to_json(const ModuleVector &x)
{
  Json out = Json::array();
  for (Index j = 0; j < x.truncation(); ++j)
    out.push_back(element_to_json(x.coord(j)));
  return out;
}

ModuleVector vector_from_json(const Json &j, const AlgebraShape &shape, Index truncation, const std::string &path)
{
  array_of(j, path, static_cast<std::size_t>(truncation));
  ModuleVector x(shape, truncation);
  for (Index i = 0; i < truncation; ++i)
    x.set_coord(i, element_from_json(j[static_cast<std::size_t>(i)], shape, child(path, static_cast<std::size_t>(i))));
  return x;
}

Json state_to_json(const State &s)
{
  Json out = Json::array();
  for (const auto &rho : s.densities())
    out.push_back(matrix_to_json(rho));
  return out;
}

State state_from_json(const Json &j, const AlgebraShape &shape, const std::string &path)
{
  array_of(j, path, static_cast<std::size_t>(shape.blocks()));
  std::vector<CMatrix> dens;
  for (Index k = 0; k < shape.blocks(); ++k)
    dens.push_back(matrix_from_json(j[static_cast<std::size_t>(k)], child(path, static_cast<std::size_t>(k)),
                                    shape.dim(k), shape.dim(k)));
  try {
    return State(shape, std::move(dens));
  } catch (const std::exception &e) {
    throw FormatError(path, e.what());
  }
}

Json pair_to_json(const AdmissiblePair &pair)
{
  Json system = Json::array(), states = Json::array();
  for (const auto &x : pair.system())
    system.push_back(vector_to_json(x));
  for (const auto &s : pair.states())
    states.push_back(state_to_json(s));
  return Json{{"system", std::move(system)}, {"states", std::move(states)}};
}

AdmissiblePair pair_from_json(const Json &j, const AlgebraShape &shape, Index truncation, const std::string &path)
{
  require_object(j, path, {"system", "states"}, {"system", "states"});
  const auto sp = child(path, "system"), tp = child(path, "states");
  array_of(j["system"], sp);
  array_of(j["states"], tp);
  std::vector<ModuleVector> system;
  std::vector<State> states;
  for (std::size_t i = 0; i < j["system"].size(); ++i)
    system.push_back(vector_from_json(j["system"][i], shape, truncation, child(sp, i)));
  for (std::size_t i = 0; i < j["states"].size(); ++i)
    states.push_back(state_from_json(j["states"][i], shape, child(tp, i)));
  try {
    return AdmissiblePair(std::move(system), std::move(states));
  } catch (const std::invalid_argument &e) {
    throw FormatError(path, e.what());
  }
}

Json certificate_to_json(const WitnessCertificate &cert)
{
  Json witnesses = Json::array();
  for (const auto &z : cert.witnesses)
    witnesses.push_back(vector_to_json(z));
  return Json{{"format", "hmnc-certificate-1"},
              {"algebra", shape_to_json(cert.pair.shape())},
              {"truncation", cert.pair.truncation()},
              {"lambda", real_to_json(cert.lambda_value)},
              {"epsilon", real_to_json(cert.epsilon)},
              {"guaranteed_bound", real_to_json(cert.guaranteed_bound)},
              {"breaks", cert.breaks},
              {"source_index", cert.source_index},
              {"witnesses", std::move(witnesses)},
              {"pair", pair_to_json(cert.pair)}};
}

WitnessCertificate certificate_from_json(const Json &j)
{
  require_object(j, "",
                 {"format", "algebra", "truncation", "lambda", "epsilon", "guaranteed_bound", "breaks", "source_index",
                  "witnesses", "pair"},
                 {"format", "algebra", "truncation", "lambda", "epsilon", "guaranteed_bound", "breaks", "source_index",
                  "witnesses", "pair"});
  if (j["format"] != "hmnc-certificate-1")
    throw FormatError("/format", "unsupported certificate format");
  auto shape = shape_from_json(j["algebra"], "/algebra");
  Index n = index_from_json(j["truncation"], "/truncation", 1);
  WitnessCertificate cert{pair_from_json(j["pair"], shape, n, "/pair"), {}, {}, {}, 0, 0, 0};
  cert.lambda_value = real_from_json(j["lambda"], "/lambda");
  cert.epsilon = real_from_json(j["epsilon"], "/epsilon");
  cert.guaranteed_bound = real_from_json(j["guaranteed_bound"], "/guaranteed_bound");
  array_of(j["witnesses"], "/witnesses");
  for (std::size_t i = 0; i < j["witnesses"].size(); ++i)
    cert.witnesses.push_back(vector_from_json(j["witnesses"][i], shape, n, child("/witnesses", i)));
  array_of(j["breaks"], "/breaks", cert.witnesses.size() + 1);
  for (std::size_t i = 0; i < j["breaks"].size(); ++i)
    cert.breaks.push_back(index_from_json(j["breaks"][i], child("/breaks", i)));
  array_of(j["source_index"], "/source_index", cert.witnesses.size());
  for (std::size_t i = 0; i < j["source_index"].size(); ++i)
    cert.source_index.push_back(index_from_json(j["source_index"][i], child("/source_index", i)));
  if (cert.pair.size() != static_cast<Index>(cert.witnesses.size()))
    throw FormatError("/pair", "pair length differs from the number of witnesses");
  return cert;
}

Json check_to_json(const CertificateCheck &check)
{
  Json radii = Json::array();
  for (const auto &[m, r] : check.radii)
    radii.push_back({{"m", m}, {"radius", real_to_json(r)}});
  return Json{{"valid", check.valid},
              {"bessel", real_to_json(check.bessel)},
              {"worst_residual", real_to_json(check.worst_residual)},
              {"diagonal_margin", real_to_json(check.diagonal_margin)},
              {"cross_margin", real_to_json(check.cross_margin)},
              {"cross_pairs", check.cross_pairs},
              {"pairwise_margin", real_to_json(check.pairwise_margin)},
              {"radii", std::move(radii)},
              {"radius_margin", real_to_json(check.radius_margin)},
              {"failures", check.failures}};
}

Json operator_to_json(const AdjointableOperator &t)
{
  Json blocks = Json::array();
  for (const auto &b : t.blocks())
    blocks.push_back(matrix_to_json(b));
  return Json{{"kind", "dense"}, {"blocks", std::move(blocks)}};
}

AdjointableOperator operator_from_json(const Json &j, const AlgebraShape &shape, Index n, const std::string &path)
{
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw FormatError(path, "operator descriptor needs a string 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "identity" || kind == "zero") {
    require_object(j, path, {"name", "kind"});
    return kind == "identity" ? AdjointableOperator::identity(shape, n) : AdjointableOperator::zero(shape, n);
  }
  if (kind == "diagonal") {
    require_object(j, path, {"name", "kind", "entries"}, {"entries"});
    const auto ep = child(path, "entries");
    if (j["entries"] == "harmonic") {
      std::vector<cplx> d;
      for (Index i = 0; i < n; ++i)
        d.push_back(1.0 / static_cast<double>(i + 1));
      return AdjointableOperator::diagonal(shape, std::span<const cplx>(d));
    }
    array_of(j["entries"], ep, static_cast<std::size_t>(n));
    std::vector<Element> d;
    for (Index i = 0; i < n; ++i)
      d.push_back(element_from_json(j["entries"][static_cast<std::size_t>(i)], shape, child(ep, static_cast<std::size_t>(i))));
    return AdjointableOperator::diagonal(shape, std::span<const Element>(d));
  }
  if (kind == "dense") {
    require_object(j, path, {"name", "kind", "blocks"}, {"blocks"});
    const auto bp = child(path, "blocks");
    array_of(j["blocks"], bp, static_cast<std::size_t>(shape.blocks()));
    std::vector<CMatrix> blocks;
    for (Index k = 0; k < shape.blocks(); ++k) {
      Index side = n * shape.dim(k);
      blocks.push_back(matrix_from_json(j["blocks"][static_cast<std::size_t>(k)], child(bp, static_cast<std::size_t>(k)),
                                        side, side));
    }
    return AdjointableOperator(shape, n, std::move(blocks));
  }
  if (kind == "theta") {
    require_object(j, path, {"name", "kind", "terms"}, {"terms"});
    const auto tp = child(path, "terms");
    array_of(j["terms"], tp);
    if (j["terms"].empty())
      throw FormatError(tp, "a theta operator needs at least one term");
    std::vector<ModuleVector> ys, zs;
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
      const auto ip = child(tp, i);
      require_object(j["terms"][i], ip, {"y", "z"}, {"y", "z"});
      ys.push_back(vector_from_json(j["terms"][i]["y"], shape, n, child(ip, "y")));
      zs.push_back(vector_from_json(j["terms"][i]["z"], shape, n, child(ip, "z")));
    }
    return AdjointableOperator::theta(ys, zs);
  }
  if (kind == "random") {
    require_object(j, path, {"name", "kind", "seed"}, {"seed"});
    if (!j["seed"].is_number_unsigned())
      throw FormatError(child(path, "seed"), "expected an unsigned integer");
    Rng rng(j["seed"].get<std::uint64_t>());
    return AdjointableOperator::random(shape, n, rng);
  }
  throw FormatError(child(path, "kind"), "unknown operator kind '" + kind + "'");
}

Json report_to_json(const MncReport &r)
{
  Json cert = nullptr;
  if (r.certificate)
    cert = Json{{"epsilon", real_to_json(r.certificate->epsilon)},
                {"guaranteed_bound", real_to_json(r.certificate->guaranteed_bound)},
                {"witnesses", r.certificate->witnesses},
                {"valid", r.certificate->valid},
                {"radius_margin", real_to_json(r.certificate->radius_margin)}};
  return Json{{"n_max", r.n_max},
              {"lambda_profile", reals_to_json(r.lambda_profile)},
              {"lambda_value", real_to_json(r.lambda_value)},
              {"norm_bound", real_to_json(r.norm_bound)},
              {"chi_lower", real_to_json(r.chi_lower)},
              {"chi_upper", real_to_json(r.chi_upper)},
              {"lower_source", r.lower_source},
              {"attaining_pair", optional_to_json(r.attaining_pair)},
              {"attaining_m", optional_to_json(r.attaining_m)},
              {"covering_radius", profile_to_json(r.covering_surrogate)},
              {"partition_diameter", profile_to_json(r.alpha_surrogate)},
              {"separation_number", profile_to_json(r.separation_surrogate)},
              {"certificate", std::move(cert)}};
}

Json report_to_json(const ComplementedReport &r)
{
  return Json{{"n_max", r.n_max},
              {"ambient_profile", reals_to_json(r.ambient_profile)},
              {"transported_profile", reals_to_json(r.transported_profile)},
              {"lambda_submodule", real_to_json(r.lambda_submodule)},
              {"lambda_ambient", real_to_json(r.lambda_ambient)},
              {"pointwise_slack", real_to_json(r.pointwise_slack)},
              {"holds", r.holds}};
}

Json report_to_json(const DirectSumReport &r)
{
  Json entries = Json::array();
  for (const auto &e : r.entries)
    entries.push_back({{"relation", e.relation},
                       {"m1", e.m1},
                       {"m2", e.m2},
                       {"lhs", real_to_json(e.lhs)},
                       {"rhs", real_to_json(e.rhs)}});
  return Json{{"entries", std::move(entries)},
              {"worst_slack", real_to_json(r.worst_slack)},
              {"identity_defect", real_to_json(r.identity_defect)},
              {"holds", r.holds}};
}

Json report_to_json(const OperatorPropertyReport &r)
{
  return Json{{"n_eval", r.n_eval},
              {"lambda_t", real_to_json(r.lambda_t)},
              {"lambda_s", real_to_json(r.lambda_s)},
              {"lambda_sum", real_to_json(r.lambda_sum)},
              {"subadditivity_slack", real_to_json(r.subadditivity_slack)},
              {"homogeneity_defect", real_to_json(r.homogeneity_defect)},
              {"norm_slack", real_to_json(r.norm_slack)},
              {"perturbation_defect", real_to_json(r.perturbation_defect)},
              {"holds", r.holds}};
}

std::vector<CsvRow> profile_rows(std::span<const double> profile, const std::string &quantity)
{
  std::vector<CsvRow> rows;
  for (std::size_t n = 0; n < profile.size(); ++n)
    rows.push_back({static_cast<Index>(n), quantity, profile[n]});
  return rows;
}

std::vector<CsvRow> profile_rows(const MncReport &r)
{
  auto rows = profile_rows(r.lambda_profile, "lambda");
  auto add = [&rows](const std::vector<ProfilePoint> &points, const char *quantity) {
    for (const auto &p : points)
      rows.push_back({p.m, quantity, p.value});
  };
  add(r.covering_surrogate, "covering_radius");
  add(r.alpha_surrogate, "partition_diameter");
  add(r.separation_surrogate, "separation_number");
  return rows;
}

std::string format_real(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream &os, std::span<const CsvRow> rows)
{
  os << "n_or_m,quantity,value\n";
  for (const auto &row : rows)
    os << row.index << ',' << row.quantity << ',' << format_real(row.value) << '\n';
}

} // namespace hmnc
