#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "zfr/common/types.hpp"

namespace zfr::io {

inline constexpr std::uint32_t kSolutionFileVersion = 1;

/// Final state of one rank ("ZFRQ"): values per cell in [var][point] order.
struct SolutionPiece {
  int rank = 0;
  int nranks = 1;
  int dim = 2;
  int p = 0;
  int nv = 4;
  int ns = 1;
  double time = 0.0;
  std::vector<GlobalId> cell_ids;
  std::vector<double> values;  ///< cell_ids.size() * nv * ns
};

void write_solution_piece(const SolutionPiece& piece, const std::filesystem::path& path);
SolutionPiece read_solution_piece(const std::filesystem::path& path);

/// File name of rank `r` inside a solve output directory.
std::string solution_piece_name(int rank);

/// Merges all pieces of a solve output directory by global cell id. Throws
/// FormatError for missing ranks, mixed degrees or a cell present twice.
std::map<GlobalId, std::vector<double>> read_solution(const std::filesystem::path& dir);

}  // namespace zfr::io
