#pragma once

#include <cstdint>
#include <string>

namespace pdrelax {

const char* version();

// 64-bit FNV-1a; stable across platforms, used to tag outputs with the
// configuration that produced them.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t x);

// "# config_hash=<hex> seed=<n> version=<v>"
std::string provenance_line(const std::string& canonical_config, std::uint64_t seed);

// Shortest round-trip decimal form, identical across runs.
std::string fmt_double(double x);

}  // namespace pdrelax
