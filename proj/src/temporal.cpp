#include "v3s/temporal.hpp"

#include <charconv>
#include <string>

#include "v3s/error.hpp"
#include "v3s/rng.hpp"

namespace v3s {

namespace {

int parse_int(std::string_view text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    fail(ErrorKind::InvalidArgument, "not an integer: '" + std::string(text) + "'");
  return v;
}

void check_positive(int v, const char* what) {
  if (v <= 0) fail(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
}

void append_stage(std::vector<std::size_t>& out, std::size_t first, int stride, int count) {
  for (int i = 0; i < count; ++i) out.push_back(first + static_cast<std::size_t>(i) * stride);
}

void check_fits(const std::vector<std::size_t>& idx, std::size_t video_len) {
  if (!idx.empty() && idx.back() >= video_len)
    fail(ErrorKind::ClipTooShort, "clip needs frame " + std::to_string(idx.back()) +
                                      " but the video has " + std::to_string(video_len));
}

}  // namespace

TemporalSpec TemporalSpec::scale(int s, int l) {
  check_positive(s, "speed");
  check_positive(l, "clip length");
  TemporalSpec t;
  t.kind = Kind::Scale;
  t.s = s;
  t.l = l;
  return t;
}

TemporalSpec TemporalSpec::projection(int s1, int s2, int l1, int l2) {
  check_positive(s1, "stage-1 speed");
  check_positive(s2, "stage-2 speed");
  check_positive(l1, "stage-1 length");
  check_positive(l2, "stage-2 length");
  if (s1 == s2) fail(ErrorKind::InvalidArgument, "projection stages need distinct speeds");
  TemporalSpec t;
  t.kind = Kind::Projection;
  t.s1 = s1;
  t.s2 = s2;
  t.l1 = l1;
  t.l2 = l2;
  return t;
}

std::string to_string(const TemporalSpec& spec) {
  if (spec.kind == TemporalSpec::Kind::Scale) return "scale:" + std::to_string(spec.s);
  return "projection:" + std::to_string(spec.s1) + ":" + std::to_string(spec.s2);
}

TemporalSpec parse_temporal_spec(std::string_view text, int l, int l1, int l2) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "scale" && !rest.empty() && rest.find(':') == std::string_view::npos)
    return TemporalSpec::scale(parse_int(rest), l);
  if (head == "projection") {
    const auto c2 = rest.find(':');
    if (c2 != std::string_view::npos)
      return TemporalSpec::projection(parse_int(rest.substr(0, c2)), parse_int(rest.substr(c2 + 1)),
                                      l1, l2);
  }
  fail(ErrorKind::InvalidArgument, "bad temporal spec '" + std::string(text) + "'");
}

int stride_of(int speed, StrideMode mode) { return mode == StrideMode::Standard ? speed : speed - 1; }

std::vector<std::size_t> scale_indices(std::size_t video_len, int s, std::size_t r, int l,
                                       StrideMode mode) {
  check_positive(s, "speed");
  check_positive(l, "clip length");
  std::vector<std::size_t> idx;
  idx.reserve(l);
  append_stage(idx, r, stride_of(s, mode), l);
  check_fits(idx, video_len);
  return idx;
}

std::vector<std::size_t> projection_indices(std::size_t video_len, int s1, int s2, std::size_t r,
                                            int l1, int l2, StrideMode mode) {
  check_positive(s1, "stage-1 speed");
  check_positive(s2, "stage-2 speed");
  check_positive(l1, "stage-1 length");
  check_positive(l2, "stage-2 length");
  const int stride1 = stride_of(s1, mode);
  const int stride2 = stride_of(s2, mode);
  std::vector<std::size_t> idx;
  idx.reserve(l1 + l2);
  append_stage(idx, r, stride1, l1);
  append_stage(idx, idx.back() + stride2, stride2, l2);
  check_fits(idx, video_len);
  return idx;
}

std::vector<std::size_t> sample_indices(const TemporalSpec& spec, std::size_t video_len,
                                        std::size_t r, StrideMode mode) {
  if (spec.kind == TemporalSpec::Kind::Scale) return scale_indices(video_len, spec.s, r, spec.l, mode);
  return projection_indices(video_len, spec.s1, spec.s2, r, spec.l1, spec.l2, mode);
}

std::size_t required_span(const TemporalSpec& spec, StrideMode mode) {
  if (spec.kind == TemporalSpec::Kind::Scale)
    return static_cast<std::size_t>(spec.l - 1) * stride_of(spec.s, mode) + 1;
  const std::size_t stage1_last = static_cast<std::size_t>(spec.l1 - 1) * stride_of(spec.s1, mode);
  return stage1_last + static_cast<std::size_t>(spec.l2) * stride_of(spec.s2, mode) + 1;
}

std::size_t choose_start(Rng& rng, std::size_t video_len, std::size_t span) {
  if (span > video_len)
    fail(ErrorKind::ClipTooShort, "span " + std::to_string(span) + " exceeds video length " +
                                      std::to_string(video_len));
  return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(video_len - span)));
}

}  // namespace v3s
