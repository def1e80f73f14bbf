#include "v3s/manifest.hpp"

#include <charconv>
#include <set>

#include "v3s/error.hpp"
#include "v3s/fileio.hpp"

namespace v3s {

namespace {

constexpr std::string_view kManifestTag = "# v3s-manifest 1";
constexpr std::string_view kManifestColumns =
    "id\tclip\tspatial\ttemporal\tvideo\tseed\tstart\tcrop\tspatial_spec\ttemporal_spec\tcatalog";
constexpr std::string_view kScenesTag = "# v3s-scenes 1";
constexpr std::string_view kScenesColumns =
    "id\tclip\tshape\tobject_w\tobject_h\tstart_x\tstart_y\tvel_x\tvel_y\twidth\theight\tframes\t"
    "channels\tfg\tbg\tseed";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Data lines: skips blank lines, '#' lines and the column header.
std::vector<std::string_view> data_lines(std::string_view text, std::string_view tag,
                                         std::string_view columns) {
  std::vector<std::string_view> out;
  bool tagged = false;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line == tag) {
      tagged = true;
      continue;
    }
    if (line.front() == '#' || line == columns) continue;
    out.push_back(line);
  }
  if (!tagged) fail(ErrorKind::BadConfig, "missing '" + std::string(tag) + "' header");
  return out;
}

std::size_t to_size(std::string_view s) { return static_cast<std::size_t>(parse_u64(s)); }

}  // namespace

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = kDigits[v & 0xf];
  return s;
}

std::uint64_t parse_hex64(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    fail(ErrorKind::BadConfig, "bad hex value '" + std::string(text) + "'");
  return v;
}

std::string encode_manifest(const std::vector<ManifestRecord>& records) {
  std::string out;
  out.append(kManifestTag).append("\n").append(kManifestColumns).append("\n");
  for (const auto& r : records) {
    out += r.id + '\t' + r.clip_path + '\t' + std::to_string(r.spatial_class) + '\t' +
           std::to_string(r.temporal_class) + '\t' + std::to_string(r.video_id) + '\t' +
           std::to_string(r.seed) + '\t' + std::to_string(r.start) + '\t' + std::to_string(r.crop.x) +
           ',' + std::to_string(r.crop.y) + ',' + std::to_string(r.crop.width) + ',' +
           std::to_string(r.crop.height) + '\t' + r.spatial_spec + '\t' + r.temporal_spec + '\t' +
           hex64(r.catalog_hash) + '\n';
  }
  return out;
}

std::vector<ManifestRecord> decode_manifest(std::string_view text) {
  std::vector<ManifestRecord> out;
  std::set<std::string> ids;
  for (auto line : data_lines(text, kManifestTag, kManifestColumns)) {
    const auto f = split(line, '\t');
    if (f.size() != 11)
      fail(ErrorKind::BadConfig, "manifest line has " + std::to_string(f.size()) + " fields, expected 11");
    ManifestRecord r;
    r.id = f[0];
    r.clip_path = f[1];
    r.spatial_class = to_size(f[2]);
    r.temporal_class = to_size(f[3]);
    r.video_id = to_size(f[4]);
    r.seed = parse_u64(f[5]);
    r.start = to_size(f[6]);
    const auto c = split(f[7], ',');
    if (c.size() != 4) fail(ErrorKind::BadConfig, "bad crop field '" + std::string(f[7]) + "'");
    r.crop = {static_cast<int>(to_size(c[0])), static_cast<int>(to_size(c[1])),
              static_cast<int>(to_size(c[2])), static_cast<int>(to_size(c[3]))};
    r.spatial_spec = f[8];
    r.temporal_spec = f[9];
    r.catalog_hash = parse_hex64(f[10]);
    if (!ids.insert(r.id).second) fail(ErrorKind::BadConfig, "duplicate sample id " + r.id);
    if (!out.empty() && out.front().catalog_hash != r.catalog_hash)
      fail(ErrorKind::CatalogMismatch, "manifest mixes catalog hashes");
    out.push_back(std::move(r));
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records) {
  write_file_atomic(path, encode_manifest(records));
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  return decode_manifest(read_file(path));
}

std::string encode_scenes(const std::vector<SceneRecord>& records) {
  std::string out;
  out.append(kScenesTag).append("\n").append(kScenesColumns).append("\n");
  for (const auto& r : records) {
    const auto& s = r.scene;
    out += r.id + '\t' + r.clip_path + '\t' + (s.shape == Shape::Rectangle ? "rectangle" : "ellipse") +
           '\t' + format_double(s.object_width) + '\t' + format_double(s.object_height) + '\t' +
           format_double(s.start.x) + '\t' + format_double(s.start.y) + '\t' +
           format_double(s.velocity.x) + '\t' + format_double(s.velocity.y) + '\t' +
           std::to_string(s.width) + '\t' + std::to_string(s.height) + '\t' +
           std::to_string(s.n_frames) + '\t' + std::to_string(s.channels) + '\t' +
           format_double(s.foreground) + '\t' + format_double(s.background) + '\t' +
           std::to_string(s.seed) + '\n';
  }
  return out;
}

std::vector<SceneRecord> decode_scenes(std::string_view text) {
  std::vector<SceneRecord> out;
  for (auto line : data_lines(text, kScenesTag, kScenesColumns)) {
    const auto f = split(line, '\t');
    if (f.size() != 16) fail(ErrorKind::BadConfig, "scene line needs 16 fields");
    SceneRecord r;
    r.id = f[0];
    r.clip_path = f[1];
    auto& s = r.scene;
    if (f[2] == "rectangle")
      s.shape = Shape::Rectangle;
    else if (f[2] == "ellipse")
      s.shape = Shape::Ellipse;
    else
      fail(ErrorKind::BadConfig, "unknown shape '" + std::string(f[2]) + "'");
    s.object_width = parse_double(f[3]);
    s.object_height = parse_double(f[4]);
    s.start = {parse_double(f[5]), parse_double(f[6])};
    s.velocity = {parse_double(f[7]), parse_double(f[8])};
    s.width = static_cast<int>(parse_u64(f[9]));
    s.height = static_cast<int>(parse_u64(f[10]));
    s.n_frames = static_cast<int>(parse_u64(f[11]));
    s.channels = static_cast<int>(parse_u64(f[12]));
    s.foreground = static_cast<float>(parse_double(f[13]));
    s.background = static_cast<float>(parse_double(f[14]));
    s.seed = parse_u64(f[15]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace v3s
