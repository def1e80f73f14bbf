#include "v3s/run_config.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "v3s/error.hpp"
#include "v3s/fileio.hpp"

namespace v3s {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view s) {
  const auto c = s.find(':');
  if (c == std::string_view::npos) fail(ErrorKind::BadConfig, "expected a:b, got '" + std::string(s) + "'");
  return {s.substr(0, c), s.substr(c + 1)};
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(ErrorKind::BadConfig, "not a boolean: '" + std::string(s) + "'");
}

int parse_int(std::string_view s) {
  const bool neg = !s.empty() && s.front() == '-';
  const auto v = static_cast<long long>(parse_u64(neg ? s.substr(1) : s));
  return static_cast<int>(neg ? -v : v);
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  const char* name;
  Setter set;
  Getter get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"spatial_identity", [](RunConfig& c, std::string_view v) { c.catalog.spatial_identity = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.catalog.spatial_identity ? "true" : "false"); }},
      {"spatial_scale",
       [](RunConfig& c, std::string_view v) {
         c.catalog.scales.clear();
         for (auto w : words(v)) {
           auto [a, b] = split_pair(w);
           c.catalog.scales.emplace_back(parse_double(a), parse_double(b));
         }
       },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.catalog.scales.size(); ++i)
           out += (i ? " " : "") + format_double(c.catalog.scales[i].first) + ":" +
                  format_double(c.catalog.scales[i].second);
         return out;
       }},
      {"projection_c",
       [](RunConfig& c, std::string_view v) {
         c.catalog.projection_c.clear();
         for (auto w : words(v)) c.catalog.projection_c.push_back(parse_double(w));
       },
       [](const RunConfig& c) { return join_doubles(c.catalog.projection_c); }},
      {"projection_sides",
       [](RunConfig& c, std::string_view v) {
         c.catalog.projection_sides.clear();
         for (auto w : words(v)) {
           try {
             c.catalog.projection_sides.push_back(parse_side(w));
           } catch (const Error& e) {
             fail(ErrorKind::BadConfig, e.what());
           }
         }
       },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.catalog.projection_sides.size(); ++i)
           out += (i ? " " : "") + std::string(to_string(c.catalog.projection_sides[i]));
         return out;
       }},
      {"temporal_speeds",
       [](RunConfig& c, std::string_view v) {
         c.catalog.speeds.clear();
         for (auto w : words(v)) c.catalog.speeds.push_back(parse_int(w));
       },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.catalog.speeds.size(); ++i)
           out += (i ? " " : "") + std::to_string(c.catalog.speeds[i]);
         return out;
       }},
      {"temporal_patterns",
       [](RunConfig& c, std::string_view v) {
         c.catalog.patterns.clear();
         for (auto w : words(v)) {
           auto [a, b] = split_pair(w);
           c.catalog.patterns.emplace_back(parse_int(a), parse_int(b));
         }
       },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.catalog.patterns.size(); ++i)
           out += (i ? " " : "") + std::to_string(c.catalog.patterns[i].first) + ":" +
                  std::to_string(c.catalog.patterns[i].second);
         return out;
       }},
      {"clip_length", [](RunConfig& c, std::string_view v) { c.catalog.clip_length = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.catalog.clip_length); }},
      {"stage1_length", [](RunConfig& c, std::string_view v) { c.catalog.stage1_length = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.catalog.stage1_length); }},
      {"stage2_length", [](RunConfig& c, std::string_view v) { c.catalog.stage2_length = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.catalog.stage2_length); }},
      {"stride_literal",
       [](RunConfig& c, std::string_view v) {
         c.geometry.stride = parse_bool(v) ? StrideMode::Literal : StrideMode::Standard;
       },
       [](const RunConfig& c) { return std::string(c.geometry.stride == StrideMode::Literal ? "true" : "false"); }},
      {"frame_size",
       [](RunConfig& c, std::string_view v) { c.scenes.width = c.scenes.height = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.scenes.width); }},
      {"resize_to", [](RunConfig& c, std::string_view v) { c.geometry.resize_to = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.geometry.resize_to); }},
      {"crop_size", [](RunConfig& c, std::string_view v) { c.geometry.crop_size = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.geometry.crop_size); }},
      {"random_crop", [](RunConfig& c, std::string_view v) { c.geometry.random_crop = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.geometry.random_crop ? "true" : "false"); }},
      {"videos", [](RunConfig& c, std::string_view v) { c.videos = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.videos); }},
      {"video_frames", [](RunConfig& c, std::string_view v) { c.scenes.n_frames = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.scenes.n_frames); }},
      {"channels", [](RunConfig& c, std::string_view v) { c.scenes.channels = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.scenes.channels); }},
      {"object_min", [](RunConfig& c, std::string_view v) { c.scenes.min_object = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.scenes.min_object); }},
      {"object_max", [](RunConfig& c, std::string_view v) { c.scenes.max_object = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.scenes.max_object); }},
      {"speed_min", [](RunConfig& c, std::string_view v) { c.scenes.min_speed = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.scenes.min_speed); }},
      {"speed_max", [](RunConfig& c, std::string_view v) { c.scenes.max_speed = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.scenes.max_speed); }},
      {"ellipses", [](RunConfig& c, std::string_view v) { c.scenes.allow_ellipse = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.scenes.allow_ellipse ? "true" : "false"); }},
      {"directions", [](RunConfig& c, std::string_view v) { c.scenes.directions = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.scenes.directions); }},
      {"foreground",
       [](RunConfig& c, std::string_view v) { c.scenes.foreground = static_cast<float>(parse_double(v)); },
       [](const RunConfig& c) { return format_double(c.scenes.foreground); }},
      {"background",
       [](RunConfig& c, std::string_view v) { c.scenes.background = static_cast<float>(parse_double(v)); },
       [](const RunConfig& c) { return format_double(c.scenes.background); }},
      {"hidden", [](RunConfig& c, std::string_view v) { c.hidden = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.hidden); }},
      {"pool_time", [](RunConfig& c, std::string_view v) { c.pool.time = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.pool.time); }},
      {"pool_height", [](RunConfig& c, std::string_view v) { c.pool.height = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.pool.height); }},
      {"pool_width", [](RunConfig& c, std::string_view v) { c.pool.width = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.pool.width); }},
      {"learning_rate", [](RunConfig& c, std::string_view v) { c.train.learning_rate = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.train.learning_rate); }},
      {"momentum", [](RunConfig& c, std::string_view v) { c.train.momentum = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.train.momentum); }},
      {"batch_size", [](RunConfig& c, std::string_view v) { c.train.batch_size = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.train.batch_size); }},
      {"epochs", [](RunConfig& c, std::string_view v) { c.train.epochs = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.train.epochs); }},
      {"weight_decay", [](RunConfig& c, std::string_view v) { c.train.weight_decay = parse_double(v); },
       [](const RunConfig& c) { return format_double(c.train.weight_decay); }},
      {"samples", [](RunConfig& c, std::string_view v) { c.samples = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.samples); }},
      {"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  std::map<std::string_view, const Key*> index;
  for (const auto& k : keys()) index[k.name] = &k;

  RunConfig c;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::BadConfig, "line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end())
      fail(ErrorKind::BadConfig, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      fail(ErrorKind::BadConfig, "line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
    try {
      it->second->set(c, value);
    } catch (const Error& e) {
      fail(ErrorKind::BadConfig, "line " + std::to_string(line_no) + " (" + std::string(key) + "): " + e.what());
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_file(path)); }

std::string to_text(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& k : keys()) out << k.name << " = " << k.get(config) << "\n";
  return out.str();
}

}  // namespace v3s
