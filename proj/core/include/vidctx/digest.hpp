#pragma once

#include <string>
#include <string_view>

namespace vidctx {

// SHA-256 of the bytes, as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace vidctx
