#pragma once

#include <cstdint>
#include <cstring>
#include <string>

namespace asindy {

// FNV-1a 64-bit, used for content digests in manifests and model metadata.
class Fnv1a {
 public:
  void update(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }

  void update(double v) { update(&v, sizeof(v)); }
  void update(const std::string& s) { update(s.data(), s.size()); }

  std::uint64_t value() const { return hash_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace asindy
