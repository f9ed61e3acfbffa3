/*  Copyright 2026 The ABCD analyzer authors.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License. */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace abcd {

// Position in a source text. Lines and columns are 1-based; columns count
// bytes. `offset`/`length` are byte offsets into the original text.
struct Span {
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::size_t offset = 0;
  std::size_t length = 0;

  std::size_t end() const { return offset + length; }
  bool contains(const Span& other) const {
    return other.offset >= offset && other.end() <= end();
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// Covering span of two spans; `first` must start no later than `last`.
inline Span join(const Span& first, const Span& last) {
  Span out = first;
  std::size_t end = last.end() > first.end() ? last.end() : first.end();
  out.length = end - first.offset;
  return out;
}

// One program file plus its corpus identity.
struct SourceProgram {
  std::string path;
  std::string dataset;
  std::string text;
};

}  // namespace abcd
