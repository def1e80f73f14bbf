#include "v3s/checkpoint.hpp"

#include "v3s/error.hpp"
#include "v3s/fileio.hpp"
#include "v3s/manifest.hpp"

namespace v3s {

std::string encode_checkpoint(const Checkpoint& c) {
  const ProbeModel& m = c.model;
  if (m.input_dim() != c.pool.input_dim(c.channels))
    fail(ErrorKind::DimensionMismatch, "model input does not match the pooling grid");
  std::string out(kCheckpointMagic);
  put_u32(out, kCheckpointVersion);
  put_u64(out, c.catalog_hash);
  for (std::size_t d : {m.input_dim(), m.hidden_dim(), m.n_spatial(), m.n_temporal()})
    put_u32(out, static_cast<std::uint32_t>(d));
  for (int d : {c.pool.time, c.pool.height, c.pool.width, c.channels}) put_u32(out, static_cast<std::uint32_t>(d));
  for (auto block : m.blocks())
    for (double v : block) put_f64(out, v);
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != kCheckpointMagic)
    fail(ErrorKind::BadMagic, "not a V3SP checkpoint");
  ByteReader r(bytes.substr(4));
  const auto version = r.u32();
  if (version != kCheckpointVersion)
    fail(ErrorKind::UnsupportedVersion, "checkpoint version " + std::to_string(version));
  Checkpoint c;
  c.catalog_hash = r.u64();
  const std::size_t in = r.u32(), hidden = r.u32(), ns = r.u32(), nt = r.u32();
  c.pool.time = static_cast<int>(r.u32());
  c.pool.height = static_cast<int>(r.u32());
  c.pool.width = static_cast<int>(r.u32());
  c.channels = static_cast<int>(r.u32());
  if (in != c.pool.input_dim(c.channels))
    fail(ErrorKind::DimensionMismatch, "checkpoint input size disagrees with its pooling grid");
  c.model = ProbeModel::zeros(in, hidden, ns, nt);
  for (auto block : c.model.blocks())
    for (double& v : block) v = r.f64();
  if (r.remaining() != 0) fail(ErrorKind::InvalidArgument, "trailing bytes after checkpoint");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_file_atomic(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path, std::uint64_t expected_catalog_hash) {
  Checkpoint c = decode_checkpoint(read_file(path));
  if (c.catalog_hash != expected_catalog_hash)
    fail(ErrorKind::CatalogMismatch, "checkpoint was trained for catalog " + hex64(c.catalog_hash) +
                                         ", current catalog is " + hex64(expected_catalog_hash));
  return c;
}

}  // namespace v3s
