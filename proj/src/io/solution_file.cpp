#include "zfr/io/solution_file.hpp"

#include <bit>
#include <cstdio>

#include "container.hpp"

namespace zfr::io {

namespace {
constexpr std::array<char, 4> kMagic{'Z', 'F', 'R', 'Q'};
}

void write_solution_piece(const SolutionPiece& s, const std::filesystem::path& path) {
  const auto per = static_cast<std::size_t>(s.nv) * static_cast<std::size_t>(s.ns);
  if (s.values.size() != s.cell_ids.size() * per) throw DomainError("solution piece size mismatch");
  detail::Container c;
  c.magic = kMagic;
  c.version = kSolutionFileVersion;
  c.header = {static_cast<std::uint64_t>(s.rank), static_cast<std::uint64_t>(s.nranks),
              static_cast<std::uint64_t>(s.dim),  static_cast<std::uint64_t>(s.p),
              static_cast<std::uint64_t>(s.nv),   static_cast<std::uint64_t>(s.ns),
              s.cell_ids.size(),                  std::bit_cast<std::uint64_t>(s.time)};
  ByteWriter w;
  w.put_raw(s.cell_ids.data(), s.cell_ids.size() * sizeof(GlobalId));
  w.put_raw(s.values.data(), s.values.size() * sizeof(double));
  c.payload = w.take();
  detail::write_container(path, c);
}

SolutionPiece read_solution_piece(const std::filesystem::path& path) {
  const auto c = detail::read_container(path, kMagic, kSolutionFileVersion);
  if (c.header.size() != 8) throw FormatError(path.string() + ": solution header must have 8 words");
  SolutionPiece s;
  s.rank = static_cast<int>(c.header[0]);
  s.nranks = static_cast<int>(c.header[1]);
  s.dim = static_cast<int>(c.header[2]);
  s.p = static_cast<int>(c.header[3]);
  s.nv = static_cast<int>(c.header[4]);
  s.ns = static_cast<int>(c.header[5]);
  const auto n = c.header[6];
  s.time = std::bit_cast<double>(c.header[7]);
  if (s.nranks < 1 || s.rank < 0 || s.rank >= s.nranks || (s.dim != 2 && s.dim != 3) || s.nv != s.dim + 2 ||
      s.ns < 1 || s.ns > 1000)
    throw FormatError(path.string() + ": implausible solution header");
  const auto per = static_cast<std::uint64_t>(s.nv) * static_cast<std::uint64_t>(s.ns);
  if (c.payload.size() != n * (sizeof(GlobalId) + per * sizeof(double)))
    throw FormatError(path.string() + ": payload length does not match the header counts");
  ByteReader r(c.payload);
  s.cell_ids.resize(n);
  for (auto& id : s.cell_ids) id = r.get<GlobalId>();
  s.values.resize(n * per);
  for (auto& v : s.values) v = r.get<double>();
  return s;
}

std::string solution_piece_name(int rank) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "state_r%05d.zfrq", rank);
  return buf;
}

std::map<GlobalId, std::vector<double>> read_solution(const std::filesystem::path& dir) {
  const auto first = read_solution_piece(dir / solution_piece_name(0));
  std::map<GlobalId, std::vector<double>> out;
  for (int r = 0; r < first.nranks; ++r) {
    const auto s = r == 0 ? first : read_solution_piece(dir / solution_piece_name(r));
    if (s.rank != r || s.nranks != first.nranks || s.p != first.p || s.dim != first.dim)
      throw FormatError((dir / solution_piece_name(r)).string() + ": piece does not belong to this solution");
    const auto per = static_cast<std::size_t>(s.nv * s.ns);
    for (std::size_t i = 0; i < s.cell_ids.size(); ++i) {
      auto [it, fresh] = out.emplace(s.cell_ids[i], std::vector<double>(s.values.begin() + static_cast<std::ptrdiff_t>(i * per),
                                                                        s.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * per)));
      if (!fresh) throw FormatError("cell " + std::to_string(s.cell_ids[i]) + " appears in two solution pieces");
    }
  }
  return out;
}

}  // namespace zfr::io
