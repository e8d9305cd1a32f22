#pragma once

#include "spomdp/model.hpp"

#include <cstdint>
#include <optional>

namespace spomdp {

struct PolicySpec {
  enum class Kind { uniform, random, explicit_table };
  Kind kind = Kind::uniform;
  /// Lower bound on every entry for Kind::random; must lie in (0, 1/A].
  double pi_min = 0.0;
  Matrix table;
};

struct GeneratorSpec {
  int X = 2;
  int Y = 4;
  int A = 2;
  int R = 2;
  double d_O_floor = 0.0;
  double sigma_O_floor = 0.0;
  /// Weight of the uniform component mixed into every transition row.
  double transition_mix = 0.1;
  PolicySpec policy;
  int max_attempts = 10000;
};

struct Instance {
  PomdpModel model;
  MemorylessPolicy policy;
  int attempts = 0;
  std::optional<double> d_O;
  double sigma_min_O = 0.0;
};

/// Rejection sampler over Dirichlet(1) density fibers. Accepts the first draw
/// that validates, has an ergodic induced chain, meets both floors, and has
/// full-rank view matrices for every action.
/// Throws ValidationError for X > Y or a bad spec, DegenerateError when the
/// attempt budget runs out.
Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed);

MemorylessPolicy make_policy(const PolicySpec& spec, int Y, int A, std::uint64_t seed);

/// X=2, Y=4, A=2, R=2, d_O >= 0.5, sigma_min(O) >= 0.1, random policy with
/// pi_min = 0.2. Generated with seed 7 it is the reference fixture.
GeneratorSpec standard_fixture_spec();
inline constexpr std::uint64_t kStandardFixtureSeed = 7;

}  // namespace spomdp
