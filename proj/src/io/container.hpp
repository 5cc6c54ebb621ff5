#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "zfr/common/bytes.hpp"

namespace zfr::io::detail {

/// Fixed prefix of every binary file: 4-byte magic, u32 version, u64 word
/// count, that many u64 header words, u64 payload length, then the payload.
struct Container {
  std::array<char, 4> magic{};
  std::uint32_t version = 0;
  std::vector<std::uint64_t> header;
  Bytes payload;
};

void write_container(const std::filesystem::path& path, const Container& c);

/// Reads and validates the prefix (magic, version, header size, payload
/// length against the file size) before touching the payload. With
/// `header_only` the payload is left empty.
Container read_container(const std::filesystem::path& path, const std::array<char, 4>& magic,
                         std::uint32_t version, bool header_only = false);

}  // namespace zfr::io::detail
