#include "v3s/clip_file.hpp"

#include <cmath>
#include <limits>

#include "v3s/error.hpp"
#include "v3s/fileio.hpp"

namespace v3s {

std::string encode_clip(const Clip& clip) {
  validate(clip);
  const Frame& f = clip.frames.front();
  constexpr auto kMax = std::numeric_limits<std::uint16_t>::max();
  if (clip.length() > kMax || f.height > kMax || f.width > kMax)
    fail(ErrorKind::InvalidArgument, "clip dimensions exceed the u16 header fields");

  std::string out;
  out.reserve(kClipHeaderBytes + clip.length() * f.data.size() * 4);
  out.append(kClipMagic);
  put_u32(out, kClipVersion);
  put_u16(out, static_cast<std::uint16_t>(clip.length()));
  put_u16(out, static_cast<std::uint16_t>(f.height));
  put_u16(out, static_cast<std::uint16_t>(f.width));
  put_u16(out, static_cast<std::uint16_t>(f.channels));
  for (const auto& frame : clip.frames)
    for (float v : frame.data) put_f32(out, v);
  return out;
}

Clip decode_clip(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != kClipMagic) fail(ErrorKind::BadMagic, "not a V3SC clip");
  ByteReader r(bytes.substr(4));
  const std::uint32_t version = r.u32();
  if (version != kClipVersion)
    fail(ErrorKind::UnsupportedVersion, "clip format version " + std::to_string(version));
  const int T = r.u16(), H = r.u16(), W = r.u16(), C = r.u16();
  if (T == 0 || H == 0 || W == 0 || (C != 1 && C != 3))
    fail(ErrorKind::InvalidArgument, "bad clip header dimensions");

  const std::size_t per_frame = static_cast<std::size_t>(H) * W * C;
  const std::size_t expected = per_frame * T * 4;
  if (r.remaining() > expected)
    fail(ErrorKind::InvalidArgument, std::to_string(r.remaining() - expected) + " trailing bytes after payload");
  if (r.remaining() < expected)
    fail(ErrorKind::TruncatedFile, "payload has " + std::to_string(r.remaining()) + " bytes, expected " +
                                       std::to_string(expected));
  Clip clip;
  clip.frames.reserve(T);
  for (int t = 0; t < T; ++t) {
    Frame f(H, W, C);
    for (auto& v : f.data) {
      v = r.f32();
      if (!(v >= 0.0f && v <= 1.0f))
        fail(ErrorKind::OutOfRangeSample, "sample " + std::to_string(v) + " outside [0,1]");
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

void write_clip(const std::filesystem::path& path, const Clip& clip) {
  write_file_atomic(path, encode_clip(clip));
}

Clip read_clip(const std::filesystem::path& path) { return decode_clip(read_file(path)); }

}  // namespace v3s
