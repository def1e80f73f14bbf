#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "v3s/frame.hpp"

namespace v3s {

// Layout: "V3SC" | u32 version | u16 T, H, W, C | T*H*W*C little-endian f32,
// frame-major then row-major, channels interleaved.
inline constexpr std::string_view kClipMagic = "V3SC";
inline constexpr std::uint32_t kClipVersion = 1;
inline constexpr std::size_t kClipHeaderBytes = 4 + 4 + 4 * 2;

std::string encode_clip(const Clip& clip);

// Throws BadMagic, UnsupportedVersion, TruncatedFile (with expected and actual
// byte counts) or OutOfRangeSample.
Clip decode_clip(std::string_view bytes);

void write_clip(const std::filesystem::path& path, const Clip& clip);
Clip read_clip(const std::filesystem::path& path);

}  // namespace v3s
