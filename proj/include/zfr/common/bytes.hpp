#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "zfr/common/error.hpp"

namespace zfr {

using Bytes = std::vector<std::uint8_t>;

// Little-endian host assumed (x86-64 / aarch64); values are copied verbatim.
static_assert(std::endian::native == std::endian::little, "little-endian host required");

class ByteWriter {
 public:
  template <class T>
    requires std::is_trivially_copyable_v<T>
  void put(const T& value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    buffer_.insert(buffer_.end(), p, p + sizeof(T));
  }

  template <class T>
    requires std::is_trivially_copyable_v<T>
  void put_span(std::span<const T> values) {
    put<std::uint64_t>(values.size());
    const auto* p = reinterpret_cast<const std::uint8_t*>(values.data());
    buffer_.insert(buffer_.end(), p, p + values.size_bytes());
  }

  void put_string(const std::string& s) {
    put<std::uint64_t>(s.size());
    buffer_.insert(buffer_.end(), s.begin(), s.end());
  }

  void put_raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buffer_.insert(buffer_.end(), p, p + n);
  }

  std::size_t size() const { return buffer_.size(); }
  Bytes& bytes() { return buffer_; }
  Bytes take() { return std::move(buffer_); }

 private:
  Bytes buffer_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  template <class T>
    requires std::is_trivially_copyable_v<T>
  T get() {
    require(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }

  template <class T>
    requires std::is_trivially_copyable_v<T>
  std::vector<T> get_vector() {
    const auto n = get<std::uint64_t>();
    if (n > remaining() / (sizeof(T) == 0 ? 1 : sizeof(T))) throw FormatError("truncated array payload");
    std::vector<T> out(n);
    std::memcpy(out.data(), data_.data() + offset_, n * sizeof(T));
    offset_ += n * sizeof(T);
    return out;
  }

  std::string get_string() {
    const auto n = get<std::uint64_t>();
    require(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + offset_), n);
    offset_ += n;
    return s;
  }

  std::size_t remaining() const { return data_.size() - offset_; }
  bool done() const { return offset_ == data_.size(); }

 private:
  void require(std::size_t n) const {
    if (n > remaining()) throw FormatError("truncated payload");
  }

  std::span<const std::uint8_t> data_;
  std::size_t offset_ = 0;
};

}  // namespace zfr
