#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace v3s {

class Rng;

inline constexpr int kDefaultClipLength = 16;
inline constexpr int kDefaultStageLength = 8;

// Frame-stride convention. Standard samples every s-th frame (s-1 frames
// skipped between picks, s = 1 is the original video). Literal reproduces the
// printed r, r+(s-1), r+2(s-1), ... sequence, whose stride is s-1.
enum class StrideMode { Standard, Literal };

struct TemporalSpec {
  enum class Kind { Scale, Projection };

  Kind kind = Kind::Scale;
  int s = 1;   // Scale speed
  int s1 = 1;  // Projection stage speeds, s1 != s2
  int s2 = 2;
  int l = kDefaultClipLength;
  int l1 = kDefaultStageLength;
  int l2 = kDefaultStageLength;

  static TemporalSpec scale(int s, int l = kDefaultClipLength);
  static TemporalSpec projection(int s1, int s2, int l1 = kDefaultStageLength,
                                 int l2 = kDefaultStageLength);

  int clip_length() const { return kind == Kind::Scale ? l : l1 + l2; }

  friend bool operator==(const TemporalSpec&, const TemporalSpec&) = default;
};

// "scale:<s>" or "projection:<s1>:<s2>"; lengths are carried by the config.
std::string to_string(const TemporalSpec& spec);
TemporalSpec parse_temporal_spec(std::string_view text, int l = kDefaultClipLength,
                                 int l1 = kDefaultStageLength, int l2 = kDefaultStageLength);

int stride_of(int speed, StrideMode mode);

// [r, r+s, ..., r+(l-1)s]. Throws ClipTooShort if the last index is past the video.
std::vector<std::size_t> scale_indices(std::size_t video_len, int s, std::size_t r, int l,
                                       StrideMode mode = StrideMode::Standard);

// l1 indices strided by s1 from r, then l2 indices strided by s2 starting one
// s2-step after the last stage-1 index.
std::vector<std::size_t> projection_indices(std::size_t video_len, int s1, int s2, std::size_t r,
                                            int l1, int l2, StrideMode mode = StrideMode::Standard);

std::vector<std::size_t> sample_indices(const TemporalSpec& spec, std::size_t video_len,
                                        std::size_t r, StrideMode mode = StrideMode::Standard);

// Minimal video length for r = 0.
std::size_t required_span(const TemporalSpec& spec, StrideMode mode = StrideMode::Standard);

// Uniform start in [0, video_len - span].
std::size_t choose_start(Rng& rng, std::size_t video_len, std::size_t span);

}  // namespace v3s
