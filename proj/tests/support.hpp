#pragma once

#include <optional>
#include <ostream>

#include "fgeom/error.hpp"
#include "fgeom/projgeom.hpp"

// Readable gtest failure output.
namespace fgeom::pg {
inline void PrintTo(const ProjPoint& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const ProjSubspace& s, std::ostream* os) { *os << s.to_string(); }
}  // namespace fgeom::pg

// Error code raised by f, or nullopt if it returns normally.
template <class F>
std::optional<fgeom::ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const fgeom::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

#define EXPECT_CODE(code, expr) EXPECT_EQ(code_of([&] { (void)(expr); }), std::optional(fgeom::ErrorCode::code))
