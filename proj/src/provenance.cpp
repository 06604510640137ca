#include "pdrelax/provenance.hpp"

#include <charconv>
#include <cstdio>

namespace pdrelax {

const char* version() { return PDRELAX_VERSION; }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string provenance_line(const std::string& canonical_config, std::uint64_t seed) {
  return "# config_hash=" + hex64(fnv1a64(canonical_config)) + " seed=" + std::to_string(seed) +
         " version=" + version();
}

std::string fmt_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace pdrelax
