#pragma once

#include <filesystem>
#include <string>

#include "zfr/mesh/mesh.hpp"

namespace zfr::io {

/// Gmsh ASCII 2.2 subset: $MeshFormat, $PhysicalNames, $Nodes, $Elements.
/// Hexahedra (type 5) are cells with quadrilaterals (type 3) as boundary
/// faces; without hexahedra, quadrilaterals are cells and lines (type 1)
/// boundary edges. Points (type 15) are skipped. The first element tag is
/// the physical group, which names the boundary patch. Throws FormatError
/// "unsupported element type N" and ParseError with the line number for
/// malformed sections.
mesh::Mesh parse_gmsh(const std::string& text);
mesh::Mesh import_gmsh_ascii(const std::filesystem::path& path);

/// Writes the mesh in the same subset (periodic images are not representable
/// and are rejected with DomainError).
std::string export_gmsh(const mesh::Mesh& mesh);

}  // namespace zfr::io
