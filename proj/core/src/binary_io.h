// Little-endian primitive readers/writers shared by the model and lexicon
// file formats.
#ifndef CMX_SRC_BINARY_IO_H_
#define CMX_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>

#include "cmx/error.h"

namespace cmx::io {

template <typename T>
T to_little(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

template <typename T>
void write(std::ostream& out, T value) {
  value = to_little(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read(std::istream& in, const char* what) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError(std::string("truncated file while reading ") + what);
  }
  return to_little(value);
}

inline void write_string(std::ostream& out, const std::string& s) {
  write<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, const char* what,
                               std::uint32_t max_len = 1u << 20) {
  const auto len = read<std::uint32_t>(in, what);
  if (len > max_len) throw DataError(std::string("corrupt length for ") + what);
  std::string s(len, '\0');
  if (len > 0 && !in.read(s.data(), len)) {
    throw DataError(std::string("truncated file while reading ") + what);
  }
  return s;
}

inline void write_floats(std::ostream& out, std::span<const float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (float v : values) write<float>(out, v);
  }
}

inline void read_floats(std::istream& in, std::span<float> values, const char* what) {
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(values.size_bytes()))) {
    throw DataError(std::string("truncated file while reading ") + what);
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (float& v : values) v = to_little(v);
  }
}

inline void expect_magic(std::istream& in, const char (&magic)[5], const char* what) {
  char buf[4];
  if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) {
    throw DataError(std::string("not a ") + what + " file (bad magic)");
  }
}

}  // namespace cmx::io

#endif  // CMX_SRC_BINARY_IO_H_
