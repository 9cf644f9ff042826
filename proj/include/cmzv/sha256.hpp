#pragma once

#include <string>

namespace cmzv {

// Hex digest of the SHA-256 hash of the input bytes.
std::string sha256_hex(const std::string& data);

}  // namespace cmzv
