#include "doctest.h"
#include "hmnc/serialize.hpp"
#include "test_support.hpp"

#include <limits>
#include <sstream>

using namespace hmnc;
using namespace hmnc::testing;

namespace {

template <typename F> std::string format_error_path(F &&f)
{
  try {
    f();
  } catch (const FormatError &e) {
    return e.path();
  }
  return "<no error>";
}

bool same(const ModuleVector &a, const ModuleVector &b)
{
  if (a.truncation() != b.truncation())
    return false;
  for (Index k = 0; k < a.shape().blocks(); ++k)
    if (a.stack(k) != b.stack(k))
      return false;
  return true;
}

} // namespace

TEST_CASE("scalars and matrices")
{
  CHECK(complex_to_json(cplx(1.5, -2)).dump() == "[1.5,-2.0]");
  CHECK(complex_from_json(Json::parse("[0.25, 3]"), "") == cplx(0.25, 3));
  CHECK(complex_from_json(Json::parse("-4"), "") == cplx(-4, 0));
  CHECK_THROWS_AS(complex_from_json(Json::parse("[1, 2, 3]"), "/z"), FormatError);
  CHECK(real_to_json(std::numeric_limits<double>::infinity()).is_null());

  Rng rng(81);
  CMatrix m = gaussian_matrix<cplx>(3, 2, rng);
  CHECK(matrix_from_json(Json::parse(matrix_to_json(m).dump()), "", 3, 2) == m);
  CHECK(format_error_path([&] { matrix_from_json(Json::parse("[[1, 2], [3]]"), "/m"); }) == "/m/1");
  CHECK(format_error_path([&] { matrix_from_json(Json::parse("[[1, 2]]"), "/m", 2, 2); }) == "/m");

  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23})
    CHECK(std::stod(format_real(v)) == v);
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("elements, vectors, states and pairs round-trip exactly")
{
  Rng rng(82);
  for (const auto &shape : algebras()) {
    auto a = random_element<cplx>(shape, rng);
    auto back = element_from_json(Json::parse(element_to_json(a).dump()), shape, "");
    for (Index k = 0; k < shape.blocks(); ++k)
      CHECK(back.block(k) == a.block(k));
    CHECK(alg_norm(element_from_json(Json::parse("[2, 1]"), shape, "") - Element::scalar(shape, cplx(2, 1))) == 0.0);

    auto x = random_vector<cplx>(shape, 3, rng);
    CHECK(same(vector_from_json(Json::parse(vector_to_json(x).dump()), shape, 3, ""), x));
    CHECK_THROWS_AS(vector_from_json(vector_to_json(x), shape, 4, ""), FormatError);

    auto s = State::random(shape, rng);
    auto sb = state_from_json(Json::parse(state_to_json(s).dump()), shape, "");
    for (Index k = 0; k < shape.blocks(); ++k)
      CHECK(sb.density(k) == s.density(k));

    auto pair = random_admissible_pair(shape, 3, 4, rng);
    auto pb = pair_from_json(Json::parse(pair_to_json(pair).dump()), shape, 3, "");
    REQUIRE(pb.size() == pair.size());
    for (Index i = 0; i < pair.size(); ++i)
      CHECK(same(pb.vector(i), pair.vector(i)));
    CHECK(seminorm_eval(pb, x) == seminorm_eval(pair, x));
  }

  auto shape = AlgebraShape{2};
  CHECK(format_error_path([&] { state_from_json(Json::parse("[[[1, 0], [0, 1]]]"), shape, "/s"); }) == "/s");
  CHECK(format_error_path([&] {
          pair_from_json(Json::parse(R"({"system": [], "states": [], "extra": 1})"), shape, 2, "/p");
        }) == "/p/extra");
}

TEST_CASE("certificates round-trip and still validate")
{
  auto shape = AlgebraShape{2};
  const Index n = 6;
  std::vector<ModuleVector> basis;
  for (Index j = 0; j < n; ++j)
    basis.push_back(ModuleVector::basis(shape, n, j));
  std::vector<double> profile(static_cast<std::size_t>(n), 1.0);
  auto cert = build_witness_system(basis, profile, 0.1);
  auto text = certificate_to_json(cert).dump(2);
  auto back = certificate_from_json(Json::parse(text));
  CHECK(certificate_to_json(back).dump(2) == text);
  CHECK(back.guaranteed_bound == cert.guaranteed_bound);
  CHECK(back.breaks == cert.breaks);
  auto check = validate_certificate(back);
  CHECK(check.valid);
  CHECK(check_to_json(check)["valid"] == true);

  auto j = Json::parse(text);
  j["breaks"].push_back(99);
  CHECK(format_error_path([&] { certificate_from_json(j); }) == "/breaks");
  j = Json::parse(text);
  j["witness"] = 1;
  CHECK(format_error_path([&] { certificate_from_json(j); }) == "/witness");
}

TEST_CASE("operator descriptors")
{
  auto shape = AlgebraShape{1, 2};
  const Index n = 3;
  auto id = operator_from_json(Json::parse(R"({"kind": "identity"})"), shape, n, "");
  CHECK(id.kind() == OperatorKind::identity);
  CHECK(op_norm(id - AdjointableOperator::identity(shape, n)) == 0.0);

  auto h = operator_from_json(Json::parse(R"({"kind": "diagonal", "entries": "harmonic"})"), shape, n, "");
  CHECK(lambda_op_profile(h, 2)[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto d = operator_from_json(Json::parse(R"({"kind": "diagonal", "entries": [1, [0, 2], 0.5]})"), shape, n, "");
  CHECK(op_norm(d) == doctest::Approx(2.0).epsilon(1e-14));

  auto r1 = operator_from_json(Json::parse(R"({"kind": "random", "seed": 5})"), shape, n, "");
  auto r2 = operator_from_json(Json::parse(R"({"kind": "random", "seed": 5})"), shape, n, "");
  CHECK(r1.block(1) == r2.block(1));
  auto dense = operator_from_json(Json::parse(operator_to_json(r1).dump()), shape, n, "");
  for (Index k = 0; k < shape.blocks(); ++k)
    CHECK(dense.block(k) == r1.block(k));

  auto theta = operator_from_json(
      Json::parse(R"({"kind": "theta", "terms": [{"y": [1, 0, 0], "z": [0, [0, 1], 0]}]})"), shape, n, "");
  CHECK(theta.support() == 1);
  auto e2 = ModuleVector::basis(shape, n, 1);
  auto image = op_apply(theta, e2);
  CHECK(alg_norm(image.coord(0) - Element::scalar(shape, cplx(0, -1))) <= 1e-15);

  CHECK(format_error_path([&] { operator_from_json(Json::parse(R"({"kind": "spiral"})"), shape, n, "/o"); }) ==
        "/o/kind");
  CHECK(format_error_path([&] {
          operator_from_json(Json::parse(R"({"kind": "identity", "scale": 2})"), shape, n, "/o");
        }) == "/o/scale");
  CHECK(format_error_path([&] {
          operator_from_json(Json::parse(R"({"kind": "dense", "blocks": [[[1]], [[1]]]})"), shape, n, "/o");
        }) == "/o/blocks/0");
}

TEST_CASE("reports and CSV")
{
  MncReport r;
  r.n_max = 2;
  r.lambda_profile = {1, 0.5, 0.25};
  r.lambda_value = 0.25;
  r.chi_upper = 0.25;
  r.covering_surrogate = {{1, 0.1, true}, {2, 0.05, false}};
  r.separation_surrogate = {{2, 0.2, true}};
  auto j = report_to_json(r);
  CHECK(j["lambda_profile"].size() == 3);
  CHECK(j["certificate"].is_null());
  CHECK(j["covering_radius"][1]["exact"] == false);
  CHECK(j.begin().key() == "n_max");

  std::ostringstream os;
  auto rows = profile_rows(r);
  write_csv(os, rows);
  CHECK(os.str() == "n_or_m,quantity,value\n"
                    "0,lambda,1\n"
                    "1,lambda,0.5\n"
                    "2,lambda,0.25\n"
                    "1,covering_radius,0.1\n"
                    "2,covering_radius,0.05\n"
                    "2,separation_number,0.2\n");

  CertificateCheck check;
  check.cross_margin = std::numeric_limits<double>::infinity();
  CHECK(check_to_json(check)["cross_margin"].is_null());
}
