#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace v3s {

// Row-major, channel-interleaved image with samples in [0, 1].
struct Frame {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<float> data;

  Frame() = default;
  Frame(int height, int width, int channels, float fill = 0.0f);

  std::size_t index(int row, int col, int ch = 0) const {
    return (static_cast<std::size_t>(row) * width + col) * channels + ch;
  }
  float& at(int row, int col, int ch = 0) { return data[index(row, col, ch)]; }
  float at(int row, int col, int ch = 0) const { return data[index(row, col, ch)]; }

  bool same_shape(const Frame& other) const {
    return height == other.height && width == other.width && channels == other.channels;
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Ordered frame sequence sharing one shape. Video is the untransformed source,
// Clip the sampled/transformed result; the layout is identical.
struct Clip {
  std::vector<Frame> frames;

  std::size_t length() const { return frames.size(); }
  bool empty() const { return frames.empty(); }

  friend bool operator==(const Clip&, const Clip&) = default;
};
using Video = Clip;

// Throws InvalidArgument on inconsistent sizes, channels outside {1,3}, or
// samples outside [0,1] / non-finite.
void validate(const Frame& frame);
void validate(const Clip& clip);

// Frames at the given indices, in order.
Clip select_frames(const Clip& video, std::span<const std::size_t> indices);

}  // namespace v3s
