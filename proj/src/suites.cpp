#include "fgeom/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace fgeom::suites {

using report::CheckRecord;
using report::Json;
using report::Status;

Range Range::parse(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw Error(ErrorCode::InvalidConfig, "bad range '" + text + "'");
    }
    return std::stoull(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return single(number(text));
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

std::vector<std::uint64_t> Range::values() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = lo; v <= hi && !empty(); ++v) out.push_back(v);
  return out;
}

std::string Range::to_string() const {
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"splash-linearity", "weight",   "club-characterization",
                                              "uniqueness",       "counting", "equivalence",
                                              "infrastructure"};
  return names;
}

void RunConfig::validate() const {
  for (const Range* rg : {&q, &n, &r}) {
    if (!rg->empty() && rg->lo == 0) throw Error(ErrorCode::InvalidConfig, "parameters must be positive");
    if (!rg->empty() && rg->hi - rg->lo > 64) throw Error(ErrorCode::InvalidConfig, "parameter range too wide");
  }
  if (workers == 0) throw Error(ErrorCode::InvalidConfig, "workers must be positive");
  if (budget == 0) throw Error(ErrorCode::InvalidConfig, "budget must be positive");
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorCode::InvalidConfig, "unknown suite '" + suite + "'");
  }
}

Json RunConfig::echo() const {
  return {{"q", q.to_string()},          {"n", n.to_string()},   {"r", r.to_string()},
          {"suite", suite},              {"seed", seed},         {"budget", budget},
          {"format", format == report::Format::Json ? "json" : "csv"}};
}

namespace {

namespace sp = splash;
namespace fr = fieldred;
using linalg::Matrix;
using linalg::Vec;
using pg::ProjPoint;
using pg::ProjSubspace;
using subgeo::Subgeometry;

struct Params {
  std::uint64_t q;
  std::uint32_t n;
  std::size_t r;
  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (o > (std::uint64_t{1} << 40)) return UINT64_MAX;  // saturate; far beyond any field we build
      o *= q;
    }
    return o;
  }
  Json json() const { return {{"q", q}, {"n", n}, {"r", r}}; }
};

bool is_prime_power(std::uint64_t q) {
  if (q < 2) return false;
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

Json big(const sp::BigInt& v) {
  if (v <= sp::BigInt(INT64_MAX)) return static_cast<std::int64_t>(v);
  return v.str();
}

std::uint64_t fnv(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, report::Report& rep) : cfg_(cfg), rep_(rep) {}

  const RunConfig& config() const { return cfg_; }

  /// Generator seeded from the run seed, the check id and its parameters, so a
  /// check draws the same cases regardless of which other checks run.
  std::mt19937_64 rng(const std::string& id, const Params& p) const {
    return std::mt19937_64(fnv(id + p.json().dump(), cfg_.seed * 0x9e3779b97f4a7c15ull + 1));
  }

  void skip(const std::string& id, const Params& p, const std::string& reason) {
    CheckRecord rec;
    rec.id = id;
    rec.parameters = p.json();
    rec.status = Status::Skipped;
    rec.reason = reason;
    rep_.checks.push_back(std::move(rec));
  }

  /// Runs body, which fills expected/observed; the check passes iff they are
  /// equal. Library errors become failures with the error text as reason.
  void run(const std::string& id, const Params& p, const std::function<void(CheckRecord&)>& body) {
    CheckRecord rec;
    rec.id = id;
    rec.parameters = p.json();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(rec);
      if (rec.status != Status::Skipped) {
        rec.status = rec.expected == rec.observed ? Status::Pass : Status::Fail;
        if (rec.status == Status::Fail && rec.reason.empty()) rec.reason = "observed differs from expected";
        if (rec.status == Status::Pass) rec.reason.clear();
      }
    } catch (const std::exception& e) {
      rec.status = Status::Fail;
      rec.reason = e.what();
    }
    if (cfg_.timings) {
      rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    rep_.checks.push_back(std::move(rec));
  }

 private:
  const RunConfig& cfg_;
  report::Report& rep_;
};

constexpr std::uint64_t kExhaustiveLines = 20000;
constexpr std::size_t kSampledLines = 500;
constexpr std::uint64_t kExhaustiveSubspaces = 50000;
constexpr std::size_t kSampledSubspaces = 2000;
constexpr std::uint64_t kEnumerationLimit = 2'000'000;

/// Admissible lines of pi0: all of them, or a seeded sample when there are many.
std::vector<ProjSubspace> selected_lines(const Subgeometry& pi0, std::mt19937_64& rng, bool& exhaustive) {
  const pg::SubspaceEnumerator e(pi0.field(), pi0.rank(), 2);
  std::vector<std::uint64_t> idx;
  exhaustive = e.size() <= kExhaustiveLines;
  if (exhaustive) {
    idx.resize(e.size());
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
    std::set<std::uint64_t> chosen;
    while (chosen.size() < kSampledLines) chosen.insert(pick(rng));
    idx.assign(chosen.begin(), chosen.end());
  }
  std::vector<ProjSubspace> out;
  for (auto i : idx) {
    ProjSubspace l(pi0.field(), pi0.rank(), e.at(i));
    if (!subgeo::in_extended_hyperplane(pi0, l)) out.push_back(std::move(l));
  }
  return out;
}

/// Visits the rank-k GF(q)-subspaces of GF(q^n)^2: all of them when few, else
/// a seeded uniform sample. Returns whether the visit was exhaustive.
bool for_each_subspace(const fr::ReductionContext& ctx, std::size_t k, std::mt19937_64& rng,
                       const std::function<void(const ProjSubspace&)>& visit) {
  const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), k);
  if (e.size() <= kExhaustiveSubspaces) {
    for (std::uint64_t i = 0; i < e.size(); ++i) visit(ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(i)));
    return true;
  }
  std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
  for (std::size_t t = 0; t < kSampledSubspaces; ++t) visit(ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(pick(rng))));
  return false;
}

bool all_weight_one(const fr::LinearSet& l) {
  return std::all_of(l.weights.begin(), l.weights.end(), [](int w) { return w == 1; });
}

bool all_count_one(const sp::Splash& s) {
  return std::all_of(s.hyperplane_counts.begin(), s.hyperplane_counts.end(), [](int c) { return c == 1; });
}

/// Splash of the realization, in PG(1, q^n) coordinates.
sp::Splash realized_splash(const sp::Realization& re) {
  return sp::in_frame(sp::compute_splash(re.pi0, re.line), re.identification);
}

std::optional<std::string> geometry_domain(const Params& p, std::size_t min_r) {
  if (p.n < 2) return "a proper subgeometry needs n >= 2";
  if (p.r < min_r) return "requires r >= " + std::to_string(min_r);
  if (p.r > 5) return "r beyond desk range (r <= 5)";
  if (p.order() > 64) return "q^n beyond desk range (q^n <= 64)";
  return std::nullopt;
}

std::optional<std::string> enumeration_domain(const Params& p) {
  if (p.r < 3 || p.r > p.n) return "requires 3 <= r <= n";
  if (p.order() > 64) return "q^n beyond desk range (q^n <= 64)";
  const auto tower = gf::Tower::make(p.q, p.n);
  if (pg::SubspaceEnumerator(*tower->base(), 2 * p.n, p.r).size() > kEnumerationLimit) {
    return "subspace enumeration beyond desk range";
  }
  return std::nullopt;
}

ProjPoint point_at_infinity(const gf::Field& f) { return ProjPoint({f.one(), f.zero()}); }

// ---------------------------------------------------------------------------

void splash_linearity(Runner& run, const Params& p) {
  if (auto why = geometry_domain(p, 2)) {
    run.skip("splash-linearity/admissible-lines", p, *why);
    run.skip("splash-linearity/realize-round-trip", p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  run.run("splash-linearity/admissible-lines", p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    const Subgeometry pi0 = subgeo::canonical_subgeometry(tower, p.r);
    bool exhaustive = false;
    const auto lines = selected_lines(pi0, rng, exhaustive);
    std::size_t failures = 0;
    for (const auto& l : lines) {
      try {
        const auto rep = sp::splash_to_linear_subspace(sp::compute_splash(pi0, l));
        if (rep.set.rank != static_cast<int>(p.r)) ++failures;
      } catch (const std::logic_error&) {
        ++failures;
      }
    }
    rec.expected = {{"lines", lines.size()}, {"failures", 0}};
    rec.observed = {{"lines", lines.size()}, {"failures", failures}};
    rec.detail = {{"exhaustive", exhaustive}};
  });
  if (p.r > 2 * p.n) {
    run.skip("splash-linearity/realize-round-trip", p, "rank exceeds 2n");
    return;
  }
  run.run("splash-linearity/realize-round-trip", p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    const fr::ReductionContext ctx(tower, 2);
    const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), p.r);
    std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
    constexpr std::size_t trials = 100;
    std::size_t degenerate = 0;
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto ls = fr::linear_set(ctx, ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(pick(rng))));
      if (ls.points.size() < 2) {
        ++degenerate;
        continue;
      }
      if (!sp::verify_realization(sp::realize_linear_set_as_splash(ctx, ls), ls)) ++failures;
    }
    rec.expected = {{"trials", trials}, {"failures", 0}};
    rec.observed = {{"trials", trials}, {"failures", failures}};
    rec.detail = {{"degenerate_skipped", degenerate}};
  });
}

void weight(Runner& run, const Params& p) {
  const char* ids[] = {"weight/hyperplane-count-theta", "weight/external-count-one-iff-scattered",
                       "weight/scattered-subspaces-realize-external"};
  if (auto why = geometry_domain(p, 2)) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const Subgeometry pi0 = subgeo::canonical_subgeometry(tower, p.r);
  run.run(ids[0], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    bool exhaustive = false;
    std::size_t points = 0;
    std::size_t failures = 0;
    for (const auto& l : selected_lines(pi0, rng, exhaustive)) {
      const auto s = sp::compute_splash(pi0, l);
      const auto rep = sp::splash_to_linear_subspace(s);
      const auto coords = sp::in_frame(s, rep.frame);
      for (std::size_t i = 0; i < coords.points.size(); ++i) {
        ++points;
        const auto w = rep.set.weight(coords.points[i]);
        if (!w || pg::theta(p.q, *w) != static_cast<std::uint64_t>(coords.hyperplane_counts[i])) ++failures;
      }
    }
    rec.expected = {{"points", points}, {"failures", 0}};
    rec.observed = {{"points", points}, {"failures", failures}};
    rec.detail = {{"exhaustive", exhaustive}};
  });
  run.run(ids[1], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    bool exhaustive = false;
    std::size_t lines = 0;
    std::size_t external = 0;
    std::size_t mismatches = 0;
    for (const auto& l : selected_lines(pi0, rng, exhaustive)) {
      ++lines;
      const auto s = sp::compute_splash(pi0, l);
      const bool ext_one = s.kind == sp::SplashKind::External && all_count_one(s);
      external += ext_one;
      if (ext_one != all_weight_one(sp::splash_to_linear_subspace(s).set)) ++mismatches;
    }
    rec.expected = {{"lines", lines}, {"mismatches", 0}};
    rec.observed = {{"lines", lines}, {"mismatches", mismatches}};
    rec.detail = {{"exhaustive", exhaustive}, {"external_count_one", external}};
  });
  if (p.r > 2 * p.n) {
    run.skip(ids[2], p, "rank exceeds 2n");
    return;
  }
  run.run(ids[2], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    const fr::ReductionContext ctx(tower, 2);
    std::size_t visited = 0;
    std::size_t scattered = 0;
    std::size_t mismatches = 0;
    const bool exhaustive = for_each_subspace(ctx, p.r, rng, [&](const ProjSubspace& u) {
      const auto ls = fr::linear_set(ctx, u);
      if (ls.points.size() < 2) return;
      ++visited;
      const bool sc = all_weight_one(ls);
      scattered += sc;
      const auto s = realized_splash(sp::realize_linear_set_as_splash(ctx, ls));
      if (sc != (s.kind == sp::SplashKind::External && all_count_one(s))) ++mismatches;
    });
    rec.expected = {{"subspaces", visited}, {"mismatches", 0}};
    rec.observed = {{"subspaces", visited}, {"mismatches", mismatches}};
    rec.detail = {{"exhaustive", exhaustive}, {"scattered", scattered}};
  });
}

/// First m-subset of PG(1, q^n) (lexicographic in point order) that is not the
/// point set of any rank-r linear set, by exhaustive scan of all rank-r subspaces.
void q2_nonlinear_witness(CheckRecord& rec, const Params& p) {
  const auto tower = gf::Tower::make(p.q, p.n);
  const fr::ReductionContext ctx(tower, 2);
  const std::size_t m = (std::size_t{1} << (p.r - 1)) + 1;
  const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), p.r);
  std::set<std::vector<ProjPoint>> linear;
  for (std::uint64_t i = 0; i < e.size(); ++i) {
    auto ls = fr::linear_set(ctx, ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(i)));
    if (ls.points.size() == m) linear.insert(std::move(ls.points));
  }
  auto universe = pg::all_points(ctx.ext(), 2);
  std::sort(universe.begin(), universe.end());
  std::optional<std::vector<ProjPoint>> witness;
  std::uint64_t subsets = 0;
  std::vector<std::size_t> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  for (bool more = m <= universe.size(); more && !witness;) {
    ++subsets;
    std::vector<ProjPoint> set;
    for (auto i : pick) set.push_back(universe[i]);
    if (!linear.count(set) && sp::closure_test(*tower, set[0], std::span(set).subspan(1))) witness = set;
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == universe.size() - m + i - 1) --i;
    if (i == 0) {
      more = false;
    } else {
      ++pick[i - 1];
      for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  rec.expected = {{"witness_found", true}};
  rec.observed = {{"witness_found", witness.has_value()}};
  Json pts = Json::array();
  if (witness) {
    for (const auto& x : *witness) pts.push_back(report::encode(x));
  }
  rec.detail = {{"subspaces_scanned", e.size()},
                {"linear_point_sets_of_size", linear.size()},
                {"subsets_examined", subsets},
                {"witness", witness ? pts : Json(nullptr)}};
  if (!witness) {
    rec.reason = "every " + std::to_string(m) + "-subset of PG(1," + std::to_string(p.order()) +
                 ") is the point set of a rank-" + std::to_string(p.r) + " linear set";
  }
}

void club_characterization(Runner& run, const Params& p) {
  const char* ids[] = {"club/tangent-lines-are-clubs", "club/clubs-realize-tangent", "club/clubs-are-subline-closed",
                       "club/closed-sets-are-clubs", "club/q2-nonlinear-witness"};
  if (auto why = geometry_domain(p, 3)) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const fr::ReductionContext ctx(tower, 2);
  run.run(ids[0], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    const Subgeometry pi0 = subgeo::canonical_subgeometry(tower, p.r);
    bool exhaustive = false;
    std::size_t lines = 0;
    std::size_t tangent = 0;
    std::size_t mismatches = 0;
    for (const auto& l : selected_lines(pi0, rng, exhaustive)) {
      ++lines;
      const auto s = sp::compute_splash(pi0, l);
      const auto rep = sp::splash_to_linear_subspace(s);
      const auto cls = fr::classify_linear_set(rep.set);
      const bool is_tangent = s.kind == sp::SplashKind::Tangent;
      tangent += is_tangent;
      const bool club = cls.kind == fr::LinearSetKind::Club;
      if (is_tangent != club || (club && rep.frame.to_line(*s.centre) != *cls.head)) ++mismatches;
    }
    rec.expected = {{"lines", lines}, {"mismatches", 0}};
    rec.observed = {{"lines", lines}, {"mismatches", mismatches}};
    rec.detail = {{"exhaustive", exhaustive}, {"tangent", tangent}};
  });
  if (p.r > 2 * p.n) {
    run.skip(ids[1], p, "rank exceeds 2n");
  } else {
    run.run(ids[1], p, [&](CheckRecord& rec) {
      auto rng = run.rng(rec.id, p);
      std::size_t visited = 0;
      std::size_t clubs = 0;
      std::size_t mismatches = 0;
      const bool exhaustive = for_each_subspace(ctx, p.r, rng, [&](const ProjSubspace& u) {
        const auto ls = fr::linear_set(ctx, u);
        if (ls.points.size() < 2) return;
        ++visited;
        const auto cls = fr::classify_linear_set(ls);
        const bool club = cls.kind == fr::LinearSetKind::Club;
        clubs += club;
        const auto s = realized_splash(sp::realize_linear_set_as_splash(ctx, ls));
        const bool is_tangent = s.kind == sp::SplashKind::Tangent;
        if (club != is_tangent || (club && s.centre != cls.head) || s.points != ls.points) ++mismatches;
      });
      rec.expected = {{"subspaces", visited}, {"mismatches", 0}};
      rec.observed = {{"subspaces", visited}, {"mismatches", mismatches}};
      rec.detail = {{"exhaustive", exhaustive}, {"clubs", clubs}};
    });
  }

  const auto why_enum = enumeration_domain(p);
  const ProjPoint t = point_at_infinity(ctx.ext());
  if (why_enum) {
    run.skip(ids[2], p, *why_enum);
  } else {
    run.run(ids[2], p, [&](CheckRecord& rec) {
      const auto clubs = sp::enumerate_tangent_splashes(ctx, p.r, t, run.config().workers);
      std::size_t closed = 0;
      for (const auto& c : clubs) {
        std::vector<ProjPoint> rest;
        for (const auto& x : c.points) {
          if (x != t) rest.push_back(x);
        }
        closed += sp::closure_test(*tower, t, rest);
      }
      rec.expected = {{"clubs", clubs.size()}, {"closed", clubs.size()}};
      rec.observed = {{"clubs", clubs.size()}, {"closed", closed}};
    });
  }

  const std::uint64_t size = pg::theta(p.q, static_cast<int>(p.r) - 1) * (p.q - 1) + 2;  // q^(r-1) + 1
  if (p.q == 2) {
    run.skip(ids[3], p, "statement (iii) holds for every set when q = 2");
  } else if (why_enum) {
    run.skip(ids[3], p, *why_enum);
  } else if (p.order() > 27 || size > 28) {
    run.skip(ids[3], p, "closed-set search beyond desk range (q^n <= 27)");
  } else {
    run.run(ids[3], p, [&](CheckRecord& rec) {
      const auto closed = sp::enumerate_closed_sets(*tower, t, size);
      std::set<std::vector<ProjPoint>> full;
      for (const auto& c : closed) {
        if (c.size() == size) full.insert(c);
      }
      std::set<std::vector<ProjPoint>> clubs;
      for (const auto& c : sp::enumerate_tangent_splashes(ctx, p.r, t, run.config().workers)) clubs.insert(c.points);
      rec.expected = {{"closed_sets_of_size", clubs.size()}, {"equal_to_clubs", true}};
      rec.observed = {{"closed_sets_of_size", full.size()}, {"equal_to_clubs", full == clubs}};
      rec.detail = {{"closed_sets_examined", closed.size()}, {"size", size}};
    });
  }

  if (p.q != 2) {
    run.skip(ids[4], p, "the witness search applies to q = 2 only");
  } else if (p.r > 2 * p.n) {
    run.skip(ids[4], p, "rank exceeds 2n");
  } else if (pg::SubspaceEnumerator(ctx.base(), ctx.reduced_len(), p.r).size() > kEnumerationLimit) {
    run.skip(ids[4], p, "subspace enumeration beyond desk range");
  } else {
    run.run(ids[4], p, [&](CheckRecord& rec) { q2_nonlinear_witness(rec, p); });
  }
}

void uniqueness(Runner& run, const Params& p) {
  const char* ids[] = {"uniqueness/admissible-tuples-per-centre", "uniqueness/tuple-in-exactly-one-splash",
                       "uniqueness/tangent-splash-through-matches", "uniqueness/tuples-per-splash"};
  if (auto why = enumeration_domain(p)) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  if (sp::tangent_tuple_count(p.q, p.n, p.r) > 200000) {
    for (auto id : ids) run.skip(id, p, "tuple scan beyond desk range");
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const fr::ReductionContext ctx(tower, 2);
  const ProjPoint t = point_at_infinity(ctx.ext());
  const auto clubs = sp::enumerate_tangent_splashes(ctx, p.r, t, run.config().workers);
  std::vector<ProjPoint> others;
  for (const auto& x : pg::all_points(ctx.ext(), 2)) {
    if (x != t) others.push_back(x);
  }

  std::size_t admissible = 0;
  std::size_t violations = 0;
  std::size_t through_mismatch = 0;
  std::vector<std::size_t> per_splash(clubs.size(), 0);
  std::vector<ProjPoint> tuple;
  std::function<void()> extend = [&] {
    if (tuple.size() == p.r) {
      if (!sp::admissible_tuple(*tower, t, tuple)) return;
      ++admissible;
      std::size_t containing = 0;
      std::size_t which = 0;
      for (std::size_t i = 0; i < clubs.size(); ++i) {
        if (std::all_of(tuple.begin(), tuple.end(), [&](const ProjPoint& x) { return clubs[i].contains(x); })) {
          ++containing;
          which = i;
        }
      }
      if (containing != 1) {
        ++violations;
        return;
      }
      ++per_splash[which];
      if (sp::tangent_splash_through(ctx, t, tuple).points != clubs[which].points) ++through_mismatch;
      return;
    }
    for (const auto& x : others) {
      if (std::find(tuple.begin(), tuple.end(), x) != tuple.end()) continue;
      tuple.push_back(x);
      extend();
      tuple.pop_back();
    }
  };
  extend();

  run.run(ids[0], p, [&](CheckRecord& rec) {
    rec.expected = {{"admissible_tuples", big(sp::tangent_tuple_count(p.q, p.n, p.r))}};
    rec.observed = {{"admissible_tuples", admissible}};
  });
  run.run(ids[1], p, [&](CheckRecord& rec) {
    rec.expected = {{"violations", 0}};
    rec.observed = {{"violations", violations}};
    rec.detail = {{"admissible_tuples", admissible}, {"splashes", clubs.size()}};
  });
  run.run(ids[2], p, [&](CheckRecord& rec) {
    rec.expected = {{"mismatches", 0}};
    rec.observed = {{"mismatches", through_mismatch}};
  });
  run.run(ids[3], p, [&](CheckRecord& rec) {
    const bool uniform = std::all_of(per_splash.begin(), per_splash.end(), [&](std::size_t c) {
      return sp::BigInt(c) == sp::tuples_per_splash(p.q, p.r);
    });
    rec.expected = {{"tuples_per_splash", big(sp::tuples_per_splash(p.q, p.r))}, {"uniform", true}};
    rec.observed = {{"tuples_per_splash", per_splash.empty() ? 0 : per_splash.front()}, {"uniform", uniform}};
  });
}

void counting(Runner& run, const Params& p) {
  const char* ids[] = {"counting/per-centre", "counting/total", "counting/tuple-identity"};
  if (auto why = enumeration_domain(p)) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const fr::ReductionContext ctx(tower, 2);
  std::vector<sp::Splash> all;
  run.run(ids[1], p, [&](CheckRecord& rec) {
    all = sp::enumerate_tangent_splashes(ctx, p.r, std::nullopt, run.config().workers);
    rec.expected = {{"tangent_splashes", big(sp::count_tangent_splashes(p.q, p.n, p.r, false))}};
    rec.observed = {{"tangent_splashes", all.size()}};
  });
  run.run(ids[0], p, [&](CheckRecord& rec) {
    std::map<ProjPoint, std::size_t> by_centre;
    for (const auto& s : all) ++by_centre[*s.centre];
    std::set<std::size_t> distinct;
    for (const auto& x : pg::all_points(ctx.ext(), 2)) distinct.insert(by_centre[x]);
    const ProjPoint t = point_at_infinity(ctx.ext());
    rec.expected = {{"per_centre", big(sp::count_tangent_splashes(p.q, p.n, p.r, true))}, {"same_for_every_centre", true}};
    rec.observed = {{"per_centre", by_centre[t]}, {"same_for_every_centre", distinct.size() == 1}};
  });
  run.run(ids[2], p, [&](CheckRecord& rec) {
    const auto k = sp::tangent_tuple_count(p.q, p.n, p.r);
    const auto n = sp::count_tangent_splashes(p.q, p.n, p.r, true);
    rec.expected = {{"K", big(k)}};
    rec.observed = {{"K", big(n * sp::tuples_per_splash(p.q, p.r))}};
    rec.detail = {{"N", big(n)}, {"tuples_per_splash", big(sp::tuples_per_splash(p.q, p.r))}};
  });
}

/// Some zeta outside GF(q) maps the GF(q)-span of rho into itself. This is the
/// condition for a second s-tuple zeta^-1 M s to exist.
bool span_has_extra_multiplier(const gf::Tower& tower, const std::vector<gf::FieldElement>& rho) {
  for (const auto& zeta : tower.ext()->elements()) {
    if (zeta.is_zero() || tower.in_base(zeta)) continue;
    const bool stable = std::all_of(rho.begin(), rho.end(), [&](const gf::FieldElement& x) {
      std::vector<gf::FieldElement> grown = rho;
      grown.push_back(zeta * x);
      return !tower.independent(grown);
    });
    if (stable) return true;
  }
  return false;
}

/// First tangent line of pi0 in enumeration order.
ProjSubspace first_tangent_line(const Subgeometry& pi0) {
  const pg::SubspaceEnumerator e(pi0.field(), pi0.rank(), 2);
  for (std::uint64_t i = 0; i < e.size(); ++i) {
    ProjSubspace l(pi0.field(), pi0.rank(), e.at(i));
    if (subgeo::in_extended_hyperplane(pi0, l)) continue;
    if (subgeo::line_position(pi0, l).kind == subgeo::LineKind::Tangent) return l;
  }
  throw std::logic_error("no tangent line");
}

Json splash_json(const sp::Splash& s) {
  Json pts = Json::array();
  for (const auto& x : s.points) pts.push_back(report::encode(x));
  return pts;
}

void equivalence(Runner& run, const Params& p) {
  const char* ids[] = {"equivalence/same-splash-pair",        "equivalence/projectivity-replay",
                       "equivalence/s-tuple-ambiguity",       "equivalence/shared-hyperplane-uniqueness",
                       "equivalence/equivalence-round-trip",  "equivalence/line-stabilizer-restriction",
                       "equivalence/club-orbit-census"};
  auto why = geometry_domain(p, 3);
  if (!why && p.r - 1 > p.n) why = "requires r - 1 <= n";
  if (why) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const std::uint32_t d = std::gcd(p.n, static_cast<std::uint32_t>(p.r - 1));

  if (d == 1) {
    run.skip(ids[0], p, "gcd(n, r-1) = 1");
    run.skip(ids[1], p, "gcd(n, r-1) = 1");
  } else {
    std::optional<equiv::SameSplashWitness> witness;
    run.run(ids[0], p, [&](CheckRecord& rec) {
      witness = equiv::construct_same_splash_pair(p.q, p.n, p.r);
      Json exp = Json::object();
      Json obs = Json::object();
      for (const auto& c : equiv::witness_invariants(*witness)) {
        exp[c.name] = true;
        obs[c.name] = c.holds;
      }
      rec.expected = exp;
      rec.observed = obs;
      rec.detail = {{"witness", report::encode(*witness)}};
    });
    run.run(ids[1], p, [&](CheckRecord& rec) {
      if (!witness) throw Error(ErrorCode::NoSolution, "no witness to replay");
      const auto kappa = equiv::find_projectivity_same_splash(witness->pi0, witness->pi1, witness->line);
      const auto ident = equiv::find_projectivity_same_splash(witness->pi0, witness->pi0, witness->line);
      rec.expected = {{"projectivity", true}, {"fixes_line", true}, {"maps_pi0_to_pi1", true}, {"identity_when_equal", true}};
      rec.observed = {{"projectivity", kappa.is_projectivity()},
                      {"fixes_line", pg::apply(kappa, witness->line) == witness->line},
                      {"maps_pi0_to_pi1", subgeo::apply(kappa, witness->pi0) == witness->pi1},
                      {"identity_when_equal", pg::projectively_equal(ident, pg::Collineation::identity(witness->pi0.field(), p.r))}};
      rec.detail = {{"kappa", report::encode(kappa)}};
    });
  }

  const Subgeometry pi0 = subgeo::canonical_subgeometry(tower, p.r);
  const ProjSubspace line = first_tangent_line(pi0);
  const sp::Splash s0 = sp::compute_splash(pi0, line);

  run.run(ids[2], p, [&](CheckRecord& rec) {
    const auto pt = std::find_if(s0.points.begin(), s0.points.end(), [&](const ProjPoint& x) { return x != *s0.centre; });
    const auto coords = equiv::splash_coordinates(*tower, s0, *pt);
    const auto& h0 = equiv::hyperplane_through(pi0, line, *pt);
    const auto sol = equiv::solve_s_tuple(pi0, line, coords, h0);
    const auto rho = coords.weights();
    std::size_t invalid = 0;
    Json alts = Json::array();
    for (const auto& a : sol.alternatives) {
      Vec acc(p.r, pi0.field().zero());
      for (std::size_t i = 0; i + 1 < p.r; ++i) acc = linalg::add(acc, linalg::scale(rho[i], a.s[i]));
      if (acc != coords.v || equiv::subgeometry_points(*tower, a.s) != h0.points) ++invalid;
      Json s = Json::array();
      for (const auto& v : a.s) s.push_back(report::encode(v));
      alts.push_back({{"zeta", report::encode(a.zeta)}, {"m", report::encode(a.m)}, {"s", s}});
    }
    const bool predicted_unique = !span_has_extra_multiplier(*tower, rho);
    rec.expected = {{"unique", predicted_unique}, {"invalid_alternatives", 0}, {"certificate_complete", true}};
    if (d == 1 && !predicted_unique) rec.reason = "a multiplier outside GF(q) exists although gcd(n, r-1) = 1";
    rec.observed = {{"unique", sol.unique()}, {"invalid_alternatives", invalid},
                    {"certificate_complete", sol.certificate_complete}};
    rec.detail = {{"alternatives", alts}, {"gcd", d}};
  });

  run.run(ids[3], p, [&](CheckRecord& rec) {
    const auto scan = equiv::shared_hyperplane_scan(pi0, line);
    const auto pt = std::find_if(s0.points.begin(), s0.points.end(), [&](const ProjPoint& x) { return x != *s0.centre; });
    const bool predicted = span_has_extra_multiplier(*tower, equiv::splash_coordinates(*tower, s0, *pt).weights());
    rec.expected = {{"distinct_same_splash_found", d > 1 && predicted}};
    rec.observed = {{"distinct_same_splash_found", scan.same_splash_but_distinct > 0}};
    rec.detail = {{"configurations", scan.configurations}, {"same_splash", scan.same_splash},
                  {"same_splash_but_distinct", scan.same_splash_but_distinct}};
  });

  const auto frame = sp::LineFrame::of_line(line);
  const sp::Splash f0 = sp::in_frame(s0, frame);
  run.run(ids[4], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    constexpr std::size_t trials = 50;
    std::size_t recovered = 0;
    std::size_t lifted = 0;
    std::uint64_t frames = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto g = equiv::random_pgl2(pi0.field(), equiv::Group::PGL, rng);
      const Subgeometry pi1 = subgeo::apply(equiv::extend_from_line(g, frame), pi0);
      const sp::Splash f1 = sp::in_frame(sp::compute_splash(pi1, line), frame);
      const auto res = equiv::splash_equivalence(f0, f1, equiv::Group::PGL, run.config().budget, run.config().workers);
      frames += res.frames_examined;
      if (!res.theta || equiv::image(*res.theta, f0.points) != f1.points) continue;
      ++recovered;
      const auto tau = equiv::lift_equivalence(pi0, pi1, line, *res.theta);
      if (pg::apply(tau, line) == line && subgeo::apply(tau, pi0) == pi1) ++lifted;
    }
    rec.expected = {{"trials", trials}, {"recovered", trials}, {"lifted", trials}};
    rec.observed = {{"trials", trials}, {"recovered", recovered}, {"lifted", lifted}};
    rec.detail = {{"frames_examined", frames}, {"splash", splash_json(f0)}};
  });

  run.run(ids[5], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    constexpr std::size_t trials = 20;
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto group = t % 2 ? equiv::Group::PGammaL : equiv::Group::PGL;
      const auto tau = equiv::random_line_stabilizer(frame, group, rng);
      const auto theta = equiv::restrict_to_line(tau, frame);
      const Subgeometry pi1 = subgeo::apply(tau, pi0);
      const sp::Splash f1 = sp::in_frame(sp::compute_splash(pi1, line), frame);
      bool ok = equiv::image(theta, f0.points) == f1.points;
      for (std::size_t i = 0; ok && i < f0.points.size(); ++i) {
        ok = f1.hyperplane_count(pg::apply(theta, f0.points[i])) == f0.hyperplane_counts[i];
      }
      failures += !ok;
    }
    rec.expected = {{"trials", trials}, {"failures", 0}};
    rec.observed = {{"trials", trials}, {"failures", failures}};
  });

  if (auto why_enum = enumeration_domain(p)) {
    run.skip(ids[6], p, *why_enum);
  } else if (p.order() > 16) {
    run.skip(ids[6], p, "census beyond desk range (q^n <= 16)");
  } else {
    run.run(ids[6], p, [&](CheckRecord& rec) {
      const fr::ReductionContext ctx(tower, 2);
      Json obs = Json::object();
      Json exp = Json::object();
      Json det = Json::object();
      for (auto group : {equiv::Group::PGL, equiv::Group::PGammaL}) {
        const auto census = equiv::club_orbit_census(ctx, p.r, group, run.config().workers);
        const std::size_t sum = std::accumulate(census.orbit_sizes.begin(), census.orbit_sizes.end(), std::size_t{0});
        const bool divides = std::all_of(census.orbit_sizes.begin(), census.orbit_sizes.end(),
                                         [&](std::size_t s) { return census.group_order % s == 0; });
        const std::string g = equiv::to_string(group);
        exp[g] = {{"orbit_sizes_sum_to_clubs", true}, {"orbit_sizes_divide_group_order", true}};
        obs[g] = {{"orbit_sizes_sum_to_clubs", sum == census.clubs}, {"orbit_sizes_divide_group_order", divides}};
        det[g] = {{"clubs", census.clubs},
                  {"group_order", census.group_order},
                  {"orbits", census.orbit_sizes.size()},
                  {"orbit_sizes", census.orbit_sizes},
                  {"projectively_nonequivalent_clubs", census.orbit_sizes.size() > 1}};
      }
      rec.expected = exp;
      rec.observed = obs;
      rec.detail = det;
    });
  }
}

void infrastructure(Runner& run, const Params& p) {
  const char* ids[] = {"infrastructure/spread-partition", "infrastructure/b-f-round-trip",
                       "infrastructure/weight-sum", "infrastructure/subline-equivariance"};
  std::optional<std::string> why;
  if (p.n < 1 || p.r < 2) why = "requires n >= 1 and r >= 2";
  if (!why && p.order() > 64) why = "q^n beyond desk range (q^n <= 64)";
  if (!why && p.r > 3) why = "r beyond desk range (r <= 3)";
  if (why) {
    for (auto id : ids) run.skip(id, p, *why);
    return;
  }
  const auto tower = gf::Tower::make(p.q, p.n);
  const fr::ReductionContext ctx(tower, p.r);
  const bool exhaustive = p.order() <= 16;
  constexpr std::size_t samples = 1000;

  run.run(ids[0], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    std::size_t bad = 0;
    std::size_t cases = 0;
    if (exhaustive) {
      const auto spread = fr::desarguesian_spread(ctx);
      std::map<ProjPoint, std::size_t> cover;
      for (const auto& el : spread) {
        if (el.subspace.point_count() != pg::theta(p.q, static_cast<int>(p.n))) ++bad;
        pg::for_each_point(el.subspace, [&](const ProjPoint& y) { ++cover[y]; });
      }
      for (const auto& [y, c] : cover) bad += c != 1;
      if (cover.size() != pg::theta(p.q, static_cast<int>(ctx.reduced_len()))) ++bad;
      if (spread.size() != pg::theta(p.order(), static_cast<int>(p.r))) ++bad;
      cases = cover.size();
    } else {
      const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), 1);
      const pg::SubspaceEnumerator pts(ctx.ext(), p.r, 1);
      std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
      std::uniform_int_distribution<std::uint64_t> pick_x(0, pts.size() - 1);
      for (; cases < samples; ++cases) {
        const ProjPoint y(e.at(pick(rng)).row_vec(0));
        const ProjPoint x = ctx.contract_point(y);
        const ProjPoint other(pts.at(pick_x(rng)).row_vec(0));
        if (!fr::field_reduce_point(ctx, x).subspace.contains(y)) ++bad;
        if (other != x && fr::field_reduce_point(ctx, other).subspace.contains(y)) ++bad;
      }
    }
    rec.expected = {{"violations", 0}};
    rec.observed = {{"violations", bad}};
    rec.detail = {{"cases", cases}, {"exhaustive", exhaustive}};
  });

  run.run(ids[1], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    std::size_t bad = 0;
    std::size_t cases = 0;
    auto check = [&](const ProjPoint& x) {
      ++cases;
      const auto b = fr::b_operator(ctx, fr::field_reduce_point(ctx, x).subspace);
      bad += b.size() != 1 || b.front() != x;
    };
    if (exhaustive) {
      for (const auto& x : pg::all_points(ctx.ext(), p.r)) check(x);
    } else {
      const pg::SubspaceEnumerator pts(ctx.ext(), p.r, 1);
      std::uniform_int_distribution<std::uint64_t> pick(0, pts.size() - 1);
      for (std::size_t t = 0; t < samples; ++t) check(ProjPoint(pts.at(pick(rng)).row_vec(0)));
    }
    rec.expected = {{"violations", 0}};
    rec.observed = {{"violations", bad}};
    rec.detail = {{"cases", cases}, {"exhaustive", exhaustive}};
  });

  run.run(ids[2], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    std::size_t bad = 0;
    std::size_t cases = 0;
    auto check = [&](const ProjSubspace& u) {
      ++cases;
      const auto ls = fr::linear_set(ctx, u);
      std::uint64_t sum = 0;
      for (int w : ls.weights) sum += pg::theta(p.q, w);
      bad += sum != pg::theta(p.q, ls.rank);
    };
    // Ranks are enumerated in ascending order while the running total stays
    // within the enumeration limit; higher ranks are sampled.
    const std::size_t len = ctx.reduced_len();
    std::size_t full_ranks = 0;
    if (exhaustive) {
      std::uint64_t budget = kEnumerationLimit;
      for (std::size_t k = 1; k <= len; ++k) {
        const pg::SubspaceEnumerator e(ctx.base(), len, k);
        if (e.size() > budget) break;
        budget -= e.size();
        for (std::uint64_t i = 0; i < e.size(); ++i) check(ProjSubspace(ctx.base(), len, e.at(i)));
        full_ranks = k;
      }
    }
    const bool all = full_ranks == len;
    if (!all) {
      std::uniform_int_distribution<std::size_t> rank(full_ranks + 1, len);
      for (std::size_t t = 0; t < samples; ++t) {
        const pg::SubspaceEnumerator e(ctx.base(), len, rank(rng));
        std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
        check(ProjSubspace(ctx.base(), len, e.at(pick(rng))));
      }
    }
    rec.expected = {{"violations", 0}};
    rec.observed = {{"violations", bad}};
    rec.detail = {{"cases", cases}, {"exhaustive", all}, {"exhaustive_up_to_rank", full_ranks}};
  });

  if (p.n < 2) {
    run.skip(ids[3], p, "sublines need n >= 2");
    return;
  }
  run.run(ids[3], p, [&](CheckRecord& rec) {
    auto rng = run.rng(rec.id, p);
    const gf::Field& f = ctx.ext();
    const auto pts = pg::all_points(f, 2);
    std::size_t bad = 0;
    std::size_t cases = 0;
    auto check = [&](const pg::Collineation& g, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
      ++cases;
      const auto before = sp::subline_through(*tower, a, b, c).points;
      const auto after = sp::subline_through(*tower, pg::apply(g, a), pg::apply(g, b), pg::apply(g, c)).points;
      bad += equiv::image(g, before) != after;
    };
    if (exhaustive) {
      std::vector<pg::Collineation> gens;
      Matrix tr = Matrix::identity(f, 2);
      tr(0, 1) = f.one();
      Matrix dil = Matrix::identity(f, 2);
      dil(0, 0) = f.primitive();
      Matrix sw(f, 2, 2);
      sw(0, 1) = f.one();
      sw(1, 0) = f.one();
      gens.emplace_back(tr);
      gens.emplace_back(dil);
      gens.emplace_back(sw);
      gens.emplace_back(Matrix::identity(f, 2), 1);
      for (const auto& a : pts) {
        for (const auto& b : pts) {
          for (const auto& c : pts) {
            if (a == b || a == c || b == c) continue;
            for (const auto& g : gens) check(g, a, b, c);
          }
        }
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      while (cases < samples) {
        const auto& a = pts[pick(rng)];
        const auto& b = pts[pick(rng)];
        const auto& c = pts[pick(rng)];
        if (a == b || a == c || b == c) continue;
        check(equiv::random_pgl2(f, equiv::Group::PGammaL, rng), a, b, c);
      }
    }
    rec.expected = {{"violations", 0}};
    rec.observed = {{"violations", bad}};
    rec.detail = {{"cases", cases}, {"exhaustive", exhaustive}};
  });
}

using SuiteFn = void (*)(Runner&, const Params&);

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table{
      {"splash-linearity", splash_linearity}, {"weight", weight},     {"club-characterization", club_characterization},
      {"uniqueness", uniqueness},             {"counting", counting}, {"equivalence", equivalence},
      {"infrastructure", infrastructure}};
  return table;
}

}  // namespace

report::Report run_suite(const RunConfig& config) {
  config.validate();
  report::Report rep;
  rep.config = config.echo();
  Runner run(config, rep);
  std::vector<std::string> selected;
  if (config.suite == "all") {
    selected = suite_names();
  } else {
    selected.push_back(config.suite);
  }
  for (auto q : config.q.values()) {
    for (auto n : config.n.values()) {
      for (auto r : config.r.values()) {
        const Params p{q, static_cast<std::uint32_t>(n), static_cast<std::size_t>(r)};
        for (const auto& name : selected) {
          if (!is_prime_power(q)) {
            run.skip(name, p, "q is not a prime power");
          } else if (p.order() > gf::Field::kMaxOrder) {
            run.skip(name, p, "q^n exceeds the supported field order");
          } else {
            suite_table().at(name)(run, p);
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace fgeom::suites
