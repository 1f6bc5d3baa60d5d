#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kuothom {

/// Deterministic pseudo-random stream derived from a master seed and a
/// stream name, so that each subsystem draws from its own sequence and adding
/// a subsystem never perturbs the others. The engine and its seeding are
/// fully specified by the standard; the distributions below are written out
/// here because the standard library ones are implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view name);

  /// Child stream, e.g. stream("arcs").substream("germ-17").
  RandomStream substream(std::string_view name) const;

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] by rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();

 private:
  RandomStream(std::uint64_t key, std::uint64_t name_hash);

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace kuothom
