#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tsw {

// All randomness is drawn from explicitly seeded 64-bit Mersenne twisters.
// The helpers below avoid the std:: distributions so that streams are
// bit-reproducible across standard library implementations.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the i-th independent stream under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
// Seed of a named sub-stream under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);
// Uniform on [lo, hi).
double uniform(Rng& rng, double lo, double hi);
// Uniform integer on [0, n). n must be positive.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);
// Standard normal via Box-Muller.
double standard_normal(Rng& rng);
// Exp(1).
double standard_exponential(Rng& rng);

}  // namespace tsw
