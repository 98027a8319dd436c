#pragma once

// Verification suites over parameter sweeps, producing reports.

#include <cstdint>
#include <string>
#include <vector>

#include "fgeom/report.hpp"

namespace fgeom::suites {

/// Inclusive integer range; lo > hi is empty.
struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static Range single(std::uint64_t v) { return {v, v}; }
  /// "7" or "2..5"; InvalidConfig otherwise.
  static Range parse(const std::string& text);
  bool empty() const { return lo > hi; }
  std::vector<std::uint64_t> values() const;
  std::string to_string() const;
};

struct RunConfig {
  Range q = Range::single(2);
  Range n = Range::single(3);
  Range r = Range::single(3);
  std::string suite = "all";
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out = "-";
  report::Format format = report::Format::Json;
  std::uint64_t budget = 1'000'000;  // candidate frames per equivalence search
  bool timings = false;

  /// InvalidConfig for zero parameters, unknown suites, zero workers.
  void validate() const;
  /// The part of the configuration that determines report content.
  report::Json echo() const;
};

/// Selectable suites, without "all".
const std::vector<std::string>& suite_names();

report::Report run_suite(const RunConfig& config);

}  // namespace fgeom::suites
