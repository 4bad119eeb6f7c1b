// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace crudwalk {

/// Small deterministic generator (xoshiro256**, seeded through splitmix64).
///
/// Used instead of <random> distributions so that a seed reproduces the same campaign
/// regardless of the standard library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform integer in [lo, hi]; requires lo <= hi.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    /// Uniform double in [lo, hi).
    double uniform_real(double lo, double hi);
    bool coin() { return (next() >> 63) != 0; }

  private:
    std::uint64_t s_[4];
};

/// Domain-separated child seed: the same root seed yields independent streams per tag.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

}  // namespace crudwalk
