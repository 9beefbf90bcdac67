#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace halluaudit::hash {

// SHA-256 digest as lowercase hex. Used for cache keys and asset hashes.
std::string sha256_hex(std::string_view data);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace halluaudit::hash
