#include "zfr/io/gmsh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "zfr/common/error.hpp"

namespace zfr::io {

namespace {

class Lines {
 public:
  explicit Lines(const std::string& text) : in_(text) {}

  bool next(std::string& out) {
    while (std::getline(in_, out)) {
      ++line_;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }
  std::string require(const char* what) {
    std::string s;
    if (!next(s)) throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
    return s;
  }
  std::size_t line() const { return line_; }

 private:
  std::istringstream in_;
  std::size_t line_ = 0;
};

template <class T>
std::vector<T> numbers(const std::string& s, std::size_t line, std::size_t at_least) {
  std::istringstream in(s);
  std::vector<T> out;
  T v;
  while (in >> v) out.push_back(v);
  if (!in.eof() || out.size() < at_least) throw ParseError(line, "malformed record '" + s + "'");
  return out;
}

std::size_t count_line(Lines& lines, const char* section) {
  const auto s = lines.require(section);
  const auto v = numbers<long long>(s, lines.line(), 1);
  if (v.size() != 1 || v[0] < 0) throw ParseError(lines.line(), std::string("expected the ") + section + " count");
  return static_cast<std::size_t>(v[0]);
}

void expect_end(Lines& lines, const std::string& tag) {
  const auto s = lines.require(tag.c_str());
  if (s != tag) throw ParseError(lines.line(), "expected " + tag);
}

struct RawElement {
  int type;
  int physical;
  std::vector<long long> nodes;
  std::size_t line;
};

int nodes_of(int type, std::size_t line) {
  switch (type) {
    case 1: return 2;
    case 3: return 4;
    case 5: return 8;
    case 15: return 1;
    default: throw FormatError("line " + std::to_string(line) + ": unsupported element type " + std::to_string(type));
  }
}

}  // namespace

mesh::Mesh parse_gmsh(const std::string& text) {
  Lines lines(text);
  std::map<int, std::string> physical_names;
  std::map<long long, std::size_t> node_index;
  std::vector<Vec3> nodes;
  std::vector<RawElement> elements;
  bool have_format = false, have_nodes = false, have_elements = false;

  std::string s;
  while (lines.next(s)) {
    if (s == "$MeshFormat") {
      const auto hdr = lines.require("format line");
      std::istringstream in(hdr);
      std::string version;
      int file_type = -1, data_size = 0;
      if (!(in >> version >> file_type >> data_size)) throw ParseError(lines.line(), "malformed $MeshFormat");
      if (version != "2.2") throw ParseError(lines.line(), "unsupported Gmsh version " + version);
      if (file_type != 0) throw ParseError(lines.line(), "binary Gmsh files are not supported");
      expect_end(lines, "$EndMeshFormat");
      have_format = true;
    } else if (s == "$PhysicalNames") {
      const auto n = count_line(lines, "$PhysicalNames");
      for (std::size_t i = 0; i < n; ++i) {
        const auto rec = lines.require("physical name");
        std::istringstream in(rec);
        int dim = 0, tag = 0;
        if (!(in >> dim >> tag)) throw ParseError(lines.line(), "malformed physical name record");
        std::string rest;
        std::getline(in, rest);
        const auto q0 = rest.find('"'), q1 = rest.rfind('"');
        if (q0 == std::string::npos || q1 == q0) throw ParseError(lines.line(), "physical name must be quoted");
        physical_names[tag] = rest.substr(q0 + 1, q1 - q0 - 1);
      }
      expect_end(lines, "$EndPhysicalNames");
    } else if (s == "$Nodes") {
      if (!have_format) throw ParseError(lines.line(), "$Nodes before $MeshFormat");
      const auto n = count_line(lines, "$Nodes");
      for (std::size_t i = 0; i < n; ++i) {
        const auto rec = lines.require("node");
        std::istringstream in(rec);
        long long id = 0;
        Vec3 x{};
        if (!(in >> id >> x[0] >> x[1] >> x[2])) throw ParseError(lines.line(), "malformed node record");
        std::string extra;
        if (in >> extra) throw ParseError(lines.line(), "trailing data in node record");
        if (!node_index.emplace(id, nodes.size()).second)
          throw ParseError(lines.line(), "duplicate node id " + std::to_string(id));
        nodes.push_back(x);
      }
      expect_end(lines, "$EndNodes");
      have_nodes = true;
    } else if (s == "$Elements") {
      if (!have_nodes) throw ParseError(lines.line(), "$Elements before $Nodes");
      const auto n = count_line(lines, "$Elements");
      for (std::size_t i = 0; i < n; ++i) {
        const auto rec = lines.require("element");
        const auto v = numbers<long long>(rec, lines.line(), 3);
        const int type = static_cast<int>(v[1]);
        const auto ntags = static_cast<std::size_t>(v[2]);
        const auto nn = static_cast<std::size_t>(nodes_of(type, lines.line()));
        if (v.size() != 3 + ntags + nn) throw ParseError(lines.line(), "element record has the wrong length");
        RawElement e{type, ntags > 0 ? static_cast<int>(v[3]) : 0, {}, lines.line()};
        for (std::size_t k = 0; k < nn; ++k) {
          const auto id = v[3 + ntags + k];
          if (!node_index.count(id)) throw ParseError(lines.line(), "unknown node " + std::to_string(id));
          e.nodes.push_back(id);
        }
        elements.push_back(std::move(e));
      }
      expect_end(lines, "$EndElements");
      have_elements = true;
    } else if (!s.empty() && s[0] == '$') {
      // Skip unknown sections whole.
      const auto end = "$End" + s.substr(1);
      std::string t;
      while (true) {
        if (!lines.next(t)) throw ParseError(lines.line(), "unterminated section " + s);
        if (t == end) break;
      }
    } else {
      throw ParseError(lines.line(), "unexpected content outside a section");
    }
  }
  if (!have_format || !have_nodes || !have_elements)
    throw FormatError("Gmsh file lacks a $MeshFormat, $Nodes or $Elements section");

  const bool three_d = std::any_of(elements.begin(), elements.end(), [](const auto& e) { return e.type == 5; });
  const int cell_type = three_d ? 5 : 3;
  const int face_type = three_d ? 3 : 1;

  mesh::Mesh m;
  m.dim = three_d ? 3 : 2;
  m.vertices = nodes;
  std::map<int, int> patch_of_group;
  std::map<int, std::vector<mesh::FaceCycle>> records;
  for (const auto& e : elements) {
    if (e.type == 15) continue;
    if (e.type == cell_type) {
      mesh::Cell c;
      c.id = static_cast<GlobalId>(m.cells.size());
      c.kind = three_d ? mesh::ElementKind::Hexahedron : mesh::ElementKind::Quadrilateral;
      for (auto id : e.nodes) c.vertex_ids.push_back(static_cast<GlobalId>(node_index.at(id)));
      try {
        mesh::validate_cell(c);
      } catch (const MeshError& err) {
        throw ParseError(e.line, err.what());
      }
      m.cells.push_back(std::move(c));
    } else if (e.type == face_type) {
      if (!patch_of_group.count(e.physical)) {
        patch_of_group[e.physical] = static_cast<int>(m.patch_names.size());
        const auto it = physical_names.find(e.physical);
        m.patch_names.push_back(it != physical_names.end() ? it->second : "physical_" + std::to_string(e.physical));
      }
      mesh::FaceCycle cyc{-1, -1, -1, -1};
      for (std::size_t k = 0; k < e.nodes.size(); ++k) cyc[k] = static_cast<GlobalId>(node_index.at(e.nodes[k]));
      records[patch_of_group[e.physical]].push_back(cyc);
    } else {
      throw FormatError("line " + std::to_string(e.line) + ": element type " + std::to_string(e.type) +
                        " cannot appear in a " + std::to_string(m.dim) + "-D mesh");
    }
  }
  for (auto& [patch, recs] : records) {
    mesh::BoundarySection sec;
    sec.patch = patch;
    sec.begin = m.boundary_record_count();
    m.boundary_records.insert(m.boundary_records.end(), recs.begin(), recs.end());
    sec.end = m.boundary_record_count();
    m.sections.push_back(sec);
  }
  return m;
}

mesh::Mesh import_gmsh_ascii(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_gmsh(ss.str());
}

std::string export_gmsh(const mesh::Mesh& m) {
  for (const auto& c : m.cells)
    for (auto b : c.images)
      if (b != 0) throw DomainError("periodic meshes cannot be exported to Gmsh");
  std::ostringstream out;
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$PhysicalNames\n" << m.patch_names.size() << "\n";
  for (std::size_t i = 0; i < m.patch_names.size(); ++i)
    out << (m.dim - 1) << " " << (i + 1) << " \"" << m.patch_names[i] << "\"\n";
  out << "$EndPhysicalNames\n$Nodes\n" << m.vertices.size() << "\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    out << (i + 1) << " " << m.vertices[i][0] << " " << m.vertices[i][1] << " " << m.vertices[i][2] << "\n";
  out << "$EndNodes\n$Elements\n" << (m.boundary_records.size() + m.cells.size()) << "\n";
  std::size_t id = 1;
  const int nfv = m.dim == 3 ? 4 : 2;
  for (GlobalId r = 0; r < m.boundary_record_count(); ++r) {
    out << id++ << " " << (m.dim == 3 ? 3 : 1) << " 2 " << (m.patch_of_record(r) + 1) << " " << (m.patch_of_record(r) + 1);
    for (int k = 0; k < nfv; ++k) out << " " << (m.boundary_records[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] + 1);
    out << "\n";
  }
  for (const auto& c : m.cells) {
    out << id++ << " " << (m.dim == 3 ? 5 : 3) << " 2 0 0";
    for (auto v : c.vertex_ids) out << " " << (v + 1);
    out << "\n";
  }
  out << "$EndElements\n";
  return out.str();
}

}  // namespace zfr::io
