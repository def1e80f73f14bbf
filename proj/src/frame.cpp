#include "v3s/frame.hpp"

#include <cmath>
#include <string>

#include "v3s/error.hpp"

namespace v3s {

Frame::Frame(int h, int w, int c, float fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c), fill) {
  if (h <= 0 || w <= 0 || (c != 1 && c != 3))
    fail(ErrorKind::InvalidArgument, "bad frame shape " + std::to_string(h) + "x" +
                                         std::to_string(w) + "x" + std::to_string(c));
}

void validate(const Frame& frame) {
  if (frame.height <= 0 || frame.width <= 0 || (frame.channels != 1 && frame.channels != 3))
    fail(ErrorKind::InvalidArgument, "bad frame shape");
  const auto expected = static_cast<std::size_t>(frame.height) * frame.width * frame.channels;
  if (frame.data.size() != expected)
    fail(ErrorKind::InvalidArgument, "frame holds " + std::to_string(frame.data.size()) +
                                         " samples, expected " + std::to_string(expected));
  for (float v : frame.data)
    if (!(v >= 0.0f && v <= 1.0f))
      fail(ErrorKind::OutOfRangeSample, "sample " + std::to_string(v) + " outside [0,1]");
}

void validate(const Clip& clip) {
  if (clip.empty()) fail(ErrorKind::InvalidArgument, "clip has no frames");
  for (const auto& f : clip.frames) {
    validate(f);
    if (!f.same_shape(clip.frames.front()))
      fail(ErrorKind::InvalidArgument, "clip frames differ in shape");
  }
}

Clip select_frames(const Clip& video, std::span<const std::size_t> indices) {
  Clip out;
  out.frames.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= video.length())
      fail(ErrorKind::ClipTooShort, "frame index " + std::to_string(i) + " beyond video length " +
                                        std::to_string(video.length()));
    out.frames.push_back(video.frames[i]);
  }
  return out;
}

}  // namespace v3s
