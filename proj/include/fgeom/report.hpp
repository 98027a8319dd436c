#pragma once

// Check records, reports and their JSON / CSV serialization.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgeom/equiv.hpp"

namespace fgeom::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "fgeom-report/1";
inline constexpr const char* kLibraryVersion = "0.3.0";

enum class Status { Pass, Fail, Skipped };
std::string to_string(Status s);
Status status_from_string(const std::string& s);

enum class Format { Json, Csv };

struct CheckRecord {
  std::string id;
  Json parameters = Json::object();
  Json expected;
  Json observed;
  Status status = Status::Pass;
  std::string reason;                 // skipped: why; fail: what differed
  std::optional<double> runtime_ms;   // only with timings enabled
  Json detail;                        // witnesses, certificates

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Summary {
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct Report {
  std::string schema = kSchema;
  std::string library_version = kLibraryVersion;
  Json config = Json::object();
  std::vector<CheckRecord> checks;

  Summary summary() const;
  bool ok() const { return summary().failed == 0; }

  friend bool operator==(const Report&, const Report&) = default;
};

Json to_json(const Report& r);
/// Inverse of to_json; throws InvalidConfig on malformed input.
Report report_from_json(const Json& j);

std::string emit(const Report& r, Format f);
/// Writes to `path`, or to stdout for "-". IoFailure on any write error.
void write(const Report& r, Format f, const std::string& path);

// Plain-data encodings used in witness records. Field elements are written as
// coefficient lists over the prime field, lowest degree first.
Json encode(const gf::FieldElement& e);
Json encode(std::span<const gf::FieldElement> v);
Json encode(const linalg::Matrix& m);
Json encode(const pg::ProjPoint& p);
Json encode(const pg::ProjSubspace& s);
Json encode(const pg::Collineation& c);
Json encode_field(const gf::Field& f);
Json encode(const equiv::SameSplashWitness& w);

}  // namespace fgeom::report
