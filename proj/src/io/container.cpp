#include "container.hpp"

#include <fstream>
#include <string>

#include "zfr/common/error.hpp"

namespace zfr::io::detail {

namespace {

constexpr std::uint64_t kMaxHeaderWords = 4096;

std::string magic_text(const std::array<char, 4>& m) { return std::string(m.begin(), m.end()); }

template <class T>
T read_value(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError(path.string() + ": truncated header");
  return v;
}

}  // namespace

void write_container(const std::filesystem::path& path, const Container& c) {
  ByteWriter w;
  w.put_raw(c.magic.data(), 4);
  w.put<std::uint32_t>(c.version);
  w.put<std::uint64_t>(c.header.size());
  for (auto h : c.header) w.put<std::uint64_t>(h);
  w.put<std::uint64_t>(c.payload.size());
  w.put_raw(c.payload.data(), c.payload.size());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Container read_container(const std::filesystem::path& path, const std::array<char, 4>& magic, std::uint32_t version,
                         bool header_only) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);

  Container c;
  in.read(c.magic.data(), 4);
  if (!in) throw FormatError(path.string() + ": file too short for a header");
  if (c.magic != magic)
    throw FormatError(path.string() + ": bad magic '" + magic_text(c.magic) + "', expected '" + magic_text(magic) + "'");
  c.version = read_value<std::uint32_t>(in, path);
  if (c.version != version)
    throw FormatError(path.string() + ": unsupported version " + std::to_string(c.version) + ", expected " +
                      std::to_string(version));
  const auto words = read_value<std::uint64_t>(in, path);
  if (words > kMaxHeaderWords) throw FormatError(path.string() + ": implausible header size");
  c.header.resize(words);
  for (auto& h : c.header) h = read_value<std::uint64_t>(in, path);
  const auto payload = read_value<std::uint64_t>(in, path);
  const std::uint64_t prefix = 4 + 4 + 8 + 8 * words + 8;
  if (file_size != prefix + payload)
    throw FormatError(path.string() + ": payload length " + std::to_string(payload) + " does not match file size " +
                      std::to_string(file_size));
  if (header_only) return c;
  c.payload.resize(payload);
  in.read(reinterpret_cast<char*>(c.payload.data()), static_cast<std::streamsize>(payload));
  if (!in) throw FormatError(path.string() + ": truncated payload");
  return c;
}

}  // namespace zfr::io::detail
