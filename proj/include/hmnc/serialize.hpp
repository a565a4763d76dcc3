#pragma once

// JSON forms of the numerical types and reports.
//
// Complex numbers are [re, im] pairs (plain numbers are accepted on input),
// matrices are arrays of rows, algebra elements are arrays of block matrices
// (a bare scalar c on input means c·1), module vectors are arrays of
// coordinates. Non-finite reals are written as null.

#include "hmnc/opmnc.hpp"

#include "json.hpp"

#include <initializer_list>
#include <iosfwd>

namespace hmnc {

using Json = nlohmann::ordered_json;

// Input that does not match the documented schema. `path` is a JSON pointer.
class FormatError : public std::runtime_error {
public:
  FormatError(std::string path, const std::string &message);
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Rejects keys outside `allowed` and missing `required` keys.
void require_object(const Json &j, const std::string &path, std::initializer_list<const char *> allowed,
                    std::initializer_list<const char *> required = {});

Json real_to_json(double v);
double real_from_json(const Json &j, const std::string &path);
Index index_from_json(const Json &j, const std::string &path, Index lo = 0);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json &j, const std::string &path);

Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j, const std::string &path, Index rows = -1, Index cols = -1);

Json shape_to_json(const AlgebraShape &shape);
AlgebraShape shape_from_json(const Json &j, const std::string &path);

Json element_to_json(const Element &a);
Element element_from_json(const Json &j, const AlgebraShape &shape, const std::string &path);

Json vector_to_json(const ModuleVector &x);
ModuleVector vector_from_json(const Json &j, const AlgebraShape &shape, Index truncation, const std::string &path);

Json state_to_json(const State &s);
State state_from_json(const Json &j, const AlgebraShape &shape, const std::string &path);

Json pair_to_json(const AdmissiblePair &pair);
AdmissiblePair pair_from_json(const Json &j, const AlgebraShape &shape, Index truncation, const std::string &path);

Json certificate_to_json(const WitnessCertificate &cert);
WitnessCertificate certificate_from_json(const Json &j);
Json check_to_json(const CertificateCheck &check);

/// Dense block form {"kind": "dense", "blocks": [...]}.
Json operator_to_json(const AdjointableOperator &t);
/// Accepts every operator descriptor kind of the scenario format:
/// identity, zero, diagonal, dense, theta, random.
AdjointableOperator operator_from_json(const Json &j, const AlgebraShape &shape, Index truncation,
                                       const std::string &path);

Json report_to_json(const MncReport &r);
Json report_to_json(const ComplementedReport &r);
Json report_to_json(const DirectSumReport &r);
Json report_to_json(const OperatorPropertyReport &r);

struct CsvRow {
  Index index = 0;
  std::string quantity;
  double value = 0;
};

/// lambda rows by n, then covering/partition/separation rows by m.
std::vector<CsvRow> profile_rows(const MncReport &r);
std::vector<CsvRow> profile_rows(std::span<const double> profile, const std::string &quantity);

/// Header `n_or_m,quantity,value`, one row per line.
void write_csv(std::ostream &os, std::span<const CsvRow> rows);

/// Shortest representation that reads back to the same double.
std::string format_real(double v);

} // namespace hmnc
