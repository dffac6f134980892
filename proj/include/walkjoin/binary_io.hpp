/*
 * Copyright 2026 The walkjoin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "walkjoin/types.hpp"

namespace walkjoin {

/// Little-endian primitive writer.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }

  template <class T>
  void put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    std::array<unsigned char, sizeof(T)> buf;
    std::memcpy(buf.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    bytes(buf.data(), buf.size());
  }

  template <class T>
  void put_array(std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(values.data(), values.size_bytes());
    } else {
      for (T v : values) put(v);
    }
  }

  void check() const {
    if (!out_) throw Error("write failed");
  }

 private:
  std::ostream& out_;
};

/// Little-endian primitive reader; short reads raise FormatError.
class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  void bytes(void* data, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(std::string("truncated file while reading ") + what);
    }
  }

  template <class T>
  T get(const char* what) {
    static_assert(std::is_arithmetic_v<T>);
    std::array<unsigned char, sizeof(T)> buf;
    bytes(buf.data(), buf.size(), what);
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    T value;
    std::memcpy(&value, buf.data(), sizeof(T));
    return value;
  }

  template <class T>
  std::vector<T> get_array(std::size_t count, const char* what) {
    std::vector<T> values;
    // grow in bounded chunks so a corrupt count hits truncation, not a huge allocation
    constexpr std::size_t kChunk = std::size_t{1} << 20;
    while (values.size() < count) {
      const std::size_t n = std::min(kChunk, count - values.size());
      const std::size_t start = values.size();
      values.resize(start + n);
      if constexpr (std::endian::native == std::endian::little) {
        bytes(values.data() + start, n * sizeof(T), what);
      } else {
        for (std::size_t i = 0; i < n; ++i) values[start + i] = get<T>(what);
      }
    }
    return values;
  }

  bool at_eof() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace walkjoin
