#include "fgeom/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace fgeom::report {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "fail";
}

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "skipped") return Status::Skipped;
  throw Error(ErrorCode::InvalidConfig, "unknown status '" + s + "'");
}

Summary Report::summary() const {
  Summary s;
  s.checks = checks.size();
  for (const auto& c : checks) {
    switch (c.status) {
      case Status::Pass: ++s.passed; break;
      case Status::Fail: ++s.failed; break;
      case Status::Skipped: ++s.skipped; break;
    }
  }
  return s;
}

namespace {

Json check_to_json(const CheckRecord& c) {
  Json j;
  j["id"] = c.id;
  j["parameters"] = c.parameters;
  j["expected"] = c.expected;
  j["observed"] = c.observed;
  j["status"] = to_string(c.status);
  j["reason"] = c.reason;
  j["runtime_ms"] = c.runtime_ms ? Json(*c.runtime_ms) : Json(nullptr);
  j["detail"] = c.detail;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string compact(const Json& j) { return j.is_null() ? "" : j.dump(); }

}  // namespace

Json to_json(const Report& r) {
  const Summary s = r.summary();
  Json j;
  j["schema"] = r.schema;
  j["library_version"] = r.library_version;
  j["config"] = r.config;
  j["summary"] = {{"checks", s.checks}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back(check_to_json(c));
  return j;
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kSchema) throw Error(ErrorCode::InvalidConfig, "unsupported schema " + r.schema);
    r.library_version = j.at("library_version").get<std::string>();
    r.config = j.at("config");
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.parameters = c.at("parameters");
      rec.expected = c.at("expected");
      rec.observed = c.at("observed");
      rec.status = status_from_string(c.at("status").get<std::string>());
      rec.reason = c.at("reason").get<std::string>();
      if (!c.at("runtime_ms").is_null()) rec.runtime_ms = c.at("runtime_ms").get<double>();
      rec.detail = c.at("detail");
      r.checks.push_back(std::move(rec));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed report: ") + e.what());
  }
}

std::string emit(const Report& r, Format f) {
  if (f == Format::Json) return to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "id,parameters,expected,observed,status,reason,runtime_ms\n";
  for (const auto& c : r.checks) {
    out << csv_field(c.id) << ',' << csv_field(compact(c.parameters)) << ',' << csv_field(compact(c.expected)) << ','
        << csv_field(compact(c.observed)) << ',' << to_string(c.status) << ',' << csv_field(c.reason) << ','
        << (c.runtime_ms ? Json(*c.runtime_ms).dump() : "") << '\n';
  }
  return out.str();
}

void write(const Report& r, Format f, const std::string& path) {
  const std::string doc = emit(r, f);
  if (path == "-") {
    std::cout << doc;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoFailure, "cannot write to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  file << doc;
  file.close();
  if (!file) throw Error(ErrorCode::IoFailure, "write to " + path + " failed");
}

Json encode(const gf::FieldElement& e) { return e.to_string(); }

Json encode(std::span<const gf::FieldElement> v) {
  Json j = Json::array();
  for (const auto& e : v) j.push_back(encode(e));
  return j;
}

Json encode(const linalg::Matrix& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) j.push_back(encode(m.row(i)));
  return j;
}

Json encode(const pg::ProjPoint& p) { return encode(p.coords()); }

Json encode(const pg::ProjSubspace& s) { return encode(s.basis()); }

Json encode(const pg::Collineation& c) {
  return {{"matrix", encode(c.matrix())}, {"frobenius_exponent", c.frobenius_exponent()}};
}

Json encode_field(const gf::Field& f) {
  Json mod = Json::array();
  for (auto c : f.modulus()) mod.push_back(c);
  return {{"p", f.characteristic()}, {"k", f.degree()}, {"modulus", mod}};
}

Json encode(const equiv::SameSplashWitness& w) {
  Json j;
  j["q"] = w.q;
  j["n"] = w.n;
  j["r"] = w.r;
  j["field"] = encode_field(w.pi0.field());
  j["subfield"] = encode_field(*w.pi0.tower().base());
  j["subfield_generator_image"] = encode(w.pi0.tower().embedding().generator_image());
  j["pi0_basis"] = encode(w.pi0.basis());
  j["pi1_basis"] = encode(w.pi1.basis());
  j["line"] = encode(w.line);
  j["centre"] = encode(w.centre);
  j["h0_coefficients"] = encode(w.h0.coefficients);
  j["h0_normal"] = encode(w.h0.normal);
  j["zeta"] = encode(w.zeta);
  j["m0"] = encode(w.m0);
  j["w"] = encode(w.w);
  j["omega"] = encode(w.omega);
  j["rho"] = encode(w.rho);
  j["m"] = encode(w.m);
  Json s = Json::array();
  for (const auto& v : w.s) s.push_back(encode(v));
  Json sp = Json::array();
  for (const auto& v : w.s_prime) sp.push_back(encode(v));
  j["s"] = s;
  j["s_prime"] = sp;
  j["kappa"] = encode(w.kappa);
  return j;
}

}  // namespace fgeom::report
