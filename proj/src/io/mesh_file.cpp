#include "zfr/io/mesh_file.hpp"

#include <string>

#include "container.hpp"
#include "zfr/common/bytes.hpp"
#include "zfr/common/error.hpp"

namespace zfr::io {

namespace {

constexpr std::array<char, 4> kMagic{'Z', 'F', 'R', 'M'};
constexpr std::size_t kFixedWords = 7;

MeshFileHeader decode_header(const detail::Container& c) {
  if (c.header.size() < kFixedWords) throw FormatError("mesh header too short");
  MeshFileHeader h;
  h.version = c.version;
  h.dim = static_cast<int>(c.header[0]);
  h.vertices = c.header[1];
  h.cells = c.header[2];
  h.sections = c.header[3];
  h.patches = c.header[4];
  h.records = c.header[5];
  const auto nkinds = c.header[6];
  if (h.dim != 2 && h.dim != 3) throw FormatError("mesh dimension " + std::to_string(h.dim) + " not 2 or 3");
  if (c.header.size() != kFixedWords + 2 * nkinds) throw FormatError("element-kind table length mismatch");
  for (std::uint64_t k = 0; k < nkinds; ++k) {
    const auto code = c.header[kFixedWords + 2 * k];
    const auto nv = c.header[kFixedWords + 2 * k + 1];
    if (code > 1) throw FormatError("unknown element kind code " + std::to_string(code));
    if (nv != static_cast<std::uint64_t>(mesh::vertex_count(static_cast<mesh::ElementKind>(code))))
      throw FormatError("element kind " + std::to_string(code) + " with " + std::to_string(nv) + " vertices");
    h.kinds.emplace_back(code, nv);
  }
  return h;
}

}  // namespace

void write_mesh(const mesh::Mesh& m, const std::filesystem::path& path) {
  detail::Container c;
  c.magic = kMagic;
  c.version = kMeshFileVersion;
  std::array<bool, 2> used{false, false};
  for (const auto& cell : m.cells) used[static_cast<std::size_t>(cell.kind)] = true;
  c.header = {static_cast<std::uint64_t>(m.dim), m.vertices.size(), m.cells.size(), m.sections.size(),
              m.patch_names.size(), m.boundary_records.size(), 0};
  for (std::uint64_t k = 0; k < 2; ++k) {
    if (!used[k]) continue;
    c.header.push_back(k);
    c.header.push_back(static_cast<std::uint64_t>(mesh::vertex_count(static_cast<mesh::ElementKind>(k))));
    ++c.header[6];
  }

  ByteWriter w;
  for (double x : m.period) w.put(x);
  for (const auto& v : m.vertices)
    for (double x : v) w.put(x);
  for (const auto& cell : m.cells) {
    w.put<std::int64_t>(cell.id);
    w.put<std::uint64_t>(static_cast<std::uint64_t>(cell.kind));
    for (auto v : cell.vertex_ids) w.put<std::int64_t>(v);
    w.put<std::uint8_t>(cell.images.empty() ? 0 : 1);
    for (auto b : cell.images) w.put<std::uint8_t>(b);
  }
  for (const auto& name : m.patch_names) w.put_string(name);
  for (const auto& s : m.sections) {
    w.put<std::int64_t>(s.patch);
    w.put<std::int64_t>(s.begin);
    w.put<std::int64_t>(s.end);
  }
  for (const auto& r : m.boundary_records)
    for (auto v : r) w.put<std::int64_t>(v);
  c.payload = w.take();
  detail::write_container(path, c);
}

MeshFileHeader read_mesh_header(const std::filesystem::path& path) {
  return decode_header(detail::read_container(path, kMagic, kMeshFileVersion, true));
}

mesh::Mesh read_mesh(const std::filesystem::path& path) {
  const auto hc = detail::read_container(path, kMagic, kMeshFileVersion, true);
  const auto h = decode_header(hc);
  // Smallest payload the counts allow: every cell at the smallest kind.
  std::uint64_t min_cell = 0;
  for (const auto& [code, nv] : h.kinds) min_cell = min_cell == 0 ? 17 + 8 * nv : std::min(min_cell, 17 + 8 * nv);
  if (h.cells > 0 && h.kinds.empty()) throw FormatError(path.string() + ": cells without an element-kind table");
  const auto c = detail::read_container(path, kMagic, kMeshFileVersion);
  const std::uint64_t minimum = 24 + 24 * h.vertices + min_cell * h.cells + 8 * h.patches + 24 * h.sections + 32 * h.records;
  if (c.payload.size() < minimum) throw FormatError(path.string() + ": payload shorter than the header counts require");

  ByteReader r(c.payload);
  mesh::Mesh m;
  m.dim = h.dim;
  for (auto& x : m.period) x = r.get<double>();
  m.vertices.resize(h.vertices);
  for (auto& v : m.vertices)
    for (auto& x : v) x = r.get<double>();
  m.cells.resize(h.cells);
  for (auto& cell : m.cells) {
    cell.id = r.get<std::int64_t>();
    const auto code = r.get<std::uint64_t>();
    bool listed = false;
    for (const auto& k : h.kinds) listed = listed || k.first == code;
    if (!listed) throw FormatError(path.string() + ": cell " + std::to_string(cell.id) + " uses an unlisted kind");
    cell.kind = static_cast<mesh::ElementKind>(code);
    cell.vertex_ids.resize(static_cast<std::size_t>(mesh::vertex_count(cell.kind)));
    for (auto& v : cell.vertex_ids) {
      v = r.get<std::int64_t>();
      if (v < 0 || static_cast<std::uint64_t>(v) >= h.vertices)
        throw FormatError(path.string() + ": cell " + std::to_string(cell.id) + " references vertex " + std::to_string(v));
    }
    if (r.get<std::uint8_t>() != 0) {
      cell.images.resize(cell.vertex_ids.size());
      for (auto& b : cell.images) b = r.get<std::uint8_t>();
    }
  }
  m.patch_names.resize(h.patches);
  for (auto& n : m.patch_names) n = r.get_string();
  m.sections.resize(h.sections);
  for (auto& s : m.sections) {
    s.patch = static_cast<int>(r.get<std::int64_t>());
    s.begin = r.get<std::int64_t>();
    s.end = r.get<std::int64_t>();
    if (s.patch < 0 || static_cast<std::uint64_t>(s.patch) >= h.patches || s.begin > s.end ||
        s.end > static_cast<GlobalId>(h.records))
      throw FormatError(path.string() + ": inconsistent boundary section");
  }
  m.boundary_records.resize(h.records);
  for (auto& rec : m.boundary_records)
    for (auto& v : rec) v = r.get<std::int64_t>();
  if (!r.done()) throw FormatError(path.string() + ": trailing bytes after the mesh payload");
  return m;
}

}  // namespace zfr::io
