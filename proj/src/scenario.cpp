#include "hmnc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hmnc::harness {

ConfigError::ConfigError(std::string location, const std::string &message)
    : std::runtime_error((location.empty() ? std::string("/") : location) + ": " + message),
      location_(std::move(location))
{
}

namespace {

std::string line_col(std::string_view text, std::size_t byte)
{
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the position one past the offending character.
  return std::to_string(line) + ":" + std::to_string(col > 1 ? col - 1 : col);
}

std::string at(const std::string &path, std::size_t i) { return path + "/" + std::to_string(i); }

double positive_real(const Json &j, const std::string &path)
{
  double v = real_from_json(j, path);
  if (!(v > 0) || !std::isfinite(v))
    throw FormatError(path, "expected a positive number");
  return v;
}

std::string descriptor_name(const Json &j, const std::string &path, std::set<std::string> &seen)
{
  if (!j.is_string())
    throw FormatError(path, "expected a string");
  auto name = j.get<std::string>();
  if (name.empty())
    throw FormatError(path, "names must be nonempty");
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      throw FormatError(path, "names may contain only letters, digits, '_' and '-'");
  if (!seen.insert(name).second)
    throw FormatError(path, "duplicate name '" + name + "'");
  return name;
}

std::uint64_t unsigned_from_json(const Json &j, const std::string &path)
{
  if (!j.is_number_unsigned())
    throw FormatError(path, "expected an unsigned integer");
  return j.get<std::uint64_t>();
}

Tolerances parse_tolerances(const Json &j)
{
  require_object(j, "/tolerances", {"projection", "psd", "normality"});
  Tolerances t;
  if (j.contains("projection"))
    t.projection = positive_real(j["projection"], "/tolerances/projection");
  if (j.contains("psd"))
    t.psd = positive_real(j["psd"], "/tolerances/psd");
  if (j.contains("normality"))
    t.normality = positive_real(j["normality"], "/tolerances/normality");
  return t;
}

ProjectionSpec parse_projection(const Json &j, const Scenario &s, const std::string &path)
{
  ProjectionSpec p;
  if (j == "identity")
    return p;
  if (j.is_string())
    throw FormatError(path, "expected \"identity\", {\"head\": n} or {\"blocks\": [...]}");
  require_object(j, path, {"head", "blocks"});
  if (j.contains("head") == j.contains("blocks"))
    throw FormatError(path, "give exactly one of 'head' and 'blocks'");
  if (j.contains("head")) {
    p.kind = ProjectionSpec::Kind::head;
    p.head = index_from_json(j["head"], path + "/head");
    if (p.head > s.truncation)
      throw FormatError(path + "/head", "head index exceeds the truncation");
    return p;
  }
  p.kind = ProjectionSpec::Kind::matrix;
  const auto bp = path + "/blocks";
  if (!j["blocks"].is_array() || static_cast<Index>(j["blocks"].size()) != s.shape.blocks())
    throw FormatError(bp, "expected one matrix per algebra block");
  for (Index k = 0; k < s.shape.blocks(); ++k) {
    Index side = s.truncation * s.shape.dim(k);
    p.blocks.push_back(matrix_from_json(j["blocks"][static_cast<std::size_t>(k)], at(bp, static_cast<std::size_t>(k)),
                                        side, side));
  }
  return p;
}

SetSpec parse_set(const Json &j, const Scenario &s, const std::string &path, std::set<std::string> &names)
{
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw FormatError(path, "set descriptor needs a string 'kind'");
  SetSpec set;
  const auto kind = j["kind"].get<std::string>();
  if (kind == "list") {
    require_object(j, path, {"name", "kind", "points"}, {"name", "points"});
    set.kind = SetKind::finite_list;
    const auto pp = path + "/points";
    if (j["points"] == "basis") {
      for (Index i = 0; i < s.truncation; ++i)
        set.points.push_back(ModuleVector::basis(s.shape, s.truncation, i));
    } else {
      if (!j["points"].is_array() || j["points"].empty())
        throw FormatError(pp, "expected \"basis\" or a nonempty array of vectors");
      for (std::size_t i = 0; i < j["points"].size(); ++i)
        set.points.push_back(vector_from_json(j["points"][i], s.shape, s.truncation, at(pp, i)));
    }
  } else if (kind == "ball") {
    require_object(j, path, {"name", "kind", "radius", "projection", "samples"}, {"name"});
    set.kind = SetKind::ball;
    if (j.contains("projection"))
      set.projection = parse_projection(j["projection"], s, path + "/projection");
  } else if (kind == "image") {
    require_object(j, path, {"name", "kind", "radius", "operator", "samples"}, {"name", "operator"});
    set.kind = SetKind::image;
    const auto op = path + "/operator";
    if (!j["operator"].is_string())
      throw FormatError(op, "expected an operator name");
    for (std::size_t i = 0; i < s.operators.size(); ++i)
      if (s.operators[i].name == j["operator"].get<std::string>())
        set.operator_index = static_cast<Index>(i);
    if (set.operator_index < 0)
      throw FormatError(op, "unknown operator '" + j["operator"].get<std::string>() + "'");
  } else {
    throw FormatError(path + "/kind", "unknown set kind '" + kind + "'");
  }
  set.name = descriptor_name(j["name"], path + "/name", names);
  if (j.contains("radius"))
    set.radius = positive_real(j["radius"], path + "/radius");
  if (j.contains("samples"))
    set.samples = index_from_json(j["samples"], path + "/samples");
  return set;
}

PairSpec parse_pair(const Json &j, const Scenario &s, const std::string &path)
{
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw FormatError(path, "pair generator needs a string 'kind'");
  PairSpec p;
  const auto kind = j["kind"].get<std::string>();
  if (kind == "basis") {
    require_object(j, path, {"kind"});
  } else if (kind == "blocked") {
    require_object(j, path, {"kind", "breaks"}, {"breaks"});
    p.kind = PairSpec::Kind::blocked;
    const auto bp = path + "/breaks";
    if (!j["breaks"].is_array() || j["breaks"].size() < 2)
      throw FormatError(bp, "expected at least two breaks");
    for (std::size_t i = 0; i < j["breaks"].size(); ++i) {
      Index b = index_from_json(j["breaks"][i], at(bp, i));
      if (b > s.truncation || (!p.breaks.empty() && b <= p.breaks.back()))
        throw FormatError(at(bp, i), "breaks must increase strictly within [0, truncation]");
      p.breaks.push_back(b);
    }
  } else if (kind == "witness") {
    require_object(j, path, {"kind", "epsilon"}, {"epsilon"});
    p.kind = PairSpec::Kind::witness;
    p.epsilon = positive_real(j["epsilon"], path + "/epsilon");
  } else {
    throw FormatError(path + "/kind", "unknown pair generator '" + kind + "'");
  }
  return p;
}

Scenario parse_document(const Json &j)
{
  require_object(j, "",
                 {"name", "algebra", "truncation", "seed", "n_max", "m_range", "samples", "tolerances", "operators",
                  "sets", "pairs", "witness"},
                 {"algebra", "truncation"});
  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string())
      throw FormatError("/name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  s.shape = shape_from_json(j["algebra"], "/algebra");
  s.truncation = index_from_json(j["truncation"], "/truncation", 1);
  s.n_max = s.truncation - 1;
  if (j.contains("seed"))
    s.seed = unsigned_from_json(j["seed"], "/seed");
  if (j.contains("n_max")) {
    s.n_max = index_from_json(j["n_max"], "/n_max");
    if (s.n_max > s.truncation)
      throw FormatError("/n_max", "n_max exceeds the truncation");
  }
  if (j.contains("m_range")) {
    if (!j["m_range"].is_array() || j["m_range"].size() != 2)
      throw FormatError("/m_range", "expected [lo, hi]");
    s.m_range.lo = index_from_json(j["m_range"][0], "/m_range/0", 1);
    s.m_range.hi = index_from_json(j["m_range"][1], "/m_range/1", s.m_range.lo);
  }
  if (j.contains("samples"))
    s.samples = index_from_json(j["samples"], "/samples", 1);
  if (j.contains("tolerances"))
    s.tolerances = parse_tolerances(j["tolerances"]);

  std::set<std::string> op_names, set_names;
  if (j.contains("operators")) {
    if (!j["operators"].is_array())
      throw FormatError("/operators", "expected an array");
    for (std::size_t i = 0; i < j["operators"].size(); ++i) {
      const auto path = at("/operators", i);
      const Json &d = j["operators"][i];
      if (!d.is_object() || !d.contains("name"))
        throw FormatError(path, "operator descriptor needs a 'name'");
      auto name = descriptor_name(d["name"], path + "/name", op_names);
      s.operators.push_back({name, operator_from_json(d, s.shape, s.truncation, path)});
    }
  }
  if (j.contains("sets")) {
    if (!j["sets"].is_array())
      throw FormatError("/sets", "expected an array");
    for (std::size_t i = 0; i < j["sets"].size(); ++i)
      s.sets.push_back(parse_set(j["sets"][i], s, at("/sets", i), set_names));
  }
  if (j.contains("pairs")) {
    if (!j["pairs"].is_array() || j["pairs"].empty())
      throw FormatError("/pairs", "expected a nonempty array");
    for (std::size_t i = 0; i < j["pairs"].size(); ++i)
      s.pairs.push_back(parse_pair(j["pairs"][i], s, at("/pairs", i)));
  } else {
    s.pairs.push_back({});
  }
  if (j.contains("witness")) {
    const Json &w = j["witness"];
    require_object(w, "/witness", {"set", "epsilon", "count"}, {"set", "epsilon"});
    WitnessSpec spec;
    if (!w["set"].is_string() || !set_names.count(w["set"].get<std::string>()))
      throw FormatError("/witness/set", "expected the name of a declared set");
    spec.set = w["set"].get<std::string>();
    spec.epsilon = positive_real(w["epsilon"], "/witness/epsilon");
    if (w.contains("count"))
      spec.count = index_from_json(w["count"], "/witness/count", 1);
    s.witness = spec;
  }
  return s;
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ConfigError(line_col(text, e.byte), "syntax error: " + std::string(e.what()));
  }
  try {
    return parse_document(j);
  } catch (const FormatError &e) {
    std::string what = e.what();
    throw ConfigError(e.path(), what.substr(what.find(": ") + 2));
  } catch (const std::invalid_argument &e) {
    // Shape and precondition errors from constructors inside descriptors.
    throw ConfigError("", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

Projection build_projection(const Scenario &s, const ProjectionSpec &spec)
{
  switch (spec.kind) {
  case ProjectionSpec::Kind::identity:
    return Projection::head(s.truncation);
  case ProjectionSpec::Kind::head:
    return Projection::head(spec.head);
  case ProjectionSpec::Kind::matrix:
    return Projection::from_blocks(s.shape, s.truncation, spec.blocks, s.tolerances.projection);
  }
  throw std::logic_error("unreachable projection kind");
}

SampledSet build_set(const Scenario &s, const SetSpec &spec, std::uint64_t seed)
{
  switch (spec.kind) {
  case SetKind::finite_list:
    return SampledSet::finite_list(spec.points);
  case SetKind::ball:
    return SampledSet::ball(build_projection(s, spec.projection), s.shape, s.truncation, spec.radius, spec.samples,
                            seed);
  case SetKind::image:
    return SampledSet::image(s.operators[static_cast<std::size_t>(spec.operator_index)].op, spec.radius,
                             spec.samples, seed);
  }
  throw std::logic_error("unreachable set kind");
}

std::vector<AdmissiblePair> build_pairs(const Scenario &s, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<AdmissiblePair> pairs;
  for (const auto &p : s.pairs) {
    if (p.kind == PairSpec::Kind::basis) {
      pairs.push_back(basis_pair(s.shape, s.truncation, State::tracial(s.shape)));
    } else if (p.kind == PairSpec::Kind::blocked) {
      std::vector<ModuleVector> ys;
      std::vector<State> states;
      for (std::size_t i = 0; i + 1 < p.breaks.size(); ++i) {
        ys.push_back(random_vector<cplx>(s.shape, s.truncation, rng));
        states.push_back(State::random(s.shape, rng));
      }
      pairs.emplace_back(build_blocked_system(ys, p.breaks), std::move(states));
    }
  }
  return pairs;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  // splitmix64 of the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace hmnc::harness
