#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace ssas {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Round half-up at `decimals` digits, the convention used by every
/// percentage this project prints.
double round_half_up(double value, int decimals);

/// Shortest round-trip decimal form, stable across runs.
std::string format_double(double value);

/// Fixed-point form with half-up rounding, e.g. format_fixed(3.555, 2) == "3.56".
std::string format_fixed(double value, int decimals);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 1469598103934665603ULL);

/// splitmix64 finalizer; good enough to derive independent streams from
/// (seed, key) pairs without a stateful generator.
std::uint64_t mix64(std::uint64_t x);

/// Combine a seed with string and integer keys into one 64-bit stream id.
std::uint64_t derive_stream(std::uint64_t seed, std::string_view key,
                            std::uint64_t lane = 0);

/// Uniform double in [0, 1) from a stream id.
double unit_double(std::uint64_t stream);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
bool file_exists(const std::string& path);
std::uint64_t hash_file(const std::string& path);

/// Run fn(0..count-1) across a small thread pool. Results must be written
/// to preallocated slots; iteration order is unspecified.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads = 0);

}  // namespace ssas
