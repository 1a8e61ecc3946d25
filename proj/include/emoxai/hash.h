#ifndef EMOXAI_HASH_H_
#define EMOXAI_HASH_H_

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace emoxai {

// 64-bit FNV-1a. Stable across platforms; used for artifact and config ids.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex_digest(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

}  // namespace emoxai

#endif  // EMOXAI_HASH_H_
