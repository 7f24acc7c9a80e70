// Copyright 2026 The tagground Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tagground/error.hpp"

namespace tagground {

namespace text {

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII only; bytes outside A-Z (including UTF-8 continuation bytes) pass
// through untouched.
inline char to_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Strips a trailing '\r' so CRLF files read like LF files.
inline std::string_view chomp(std::string_view line) noexcept {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace text

/// How aggressively raw tag text is folded.
///
/// kPreserve keeps punctuation, so "web2.0" and "web2_0" stay distinct tags.
/// kFoldSeparators additionally rewrites every run of '.', '_' and '-' to a
/// single '_'.
enum class NormalizationMode { kPreserve, kFoldSeparators };

inline std::string_view to_string(NormalizationMode mode) noexcept {
  return mode == NormalizationMode::kPreserve ? "preserve" : "fold-separators";
}

/// Lowercases, trims and collapses internal whitespace runs to one space.
/// Returns an empty string when nothing but whitespace was given.
inline std::string normalize_text(std::string_view raw,
                                  NormalizationMode mode =
                                      NormalizationMode::kPreserve) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  bool pending_separator = false;
  for (const char c : text::trim(raw)) {
    if (text::is_space(c)) {
      pending_space = true;
      continue;
    }
    const bool separator = mode == NormalizationMode::kFoldSeparators &&
                           (c == '.' || c == '_' || c == '-');
    if (separator) {
      pending_separator = true;
      continue;
    }
    if (pending_separator) {
      out.push_back('_');
      pending_separator = false;
      pending_space = false;
    } else if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(text::to_lower(c));
  }
  if (pending_separator) out.push_back('_');
  return out;
}

/// A tag after normalization. The only way to build one is through
/// normalization, so a NormalizedTag is never empty.
class NormalizedTag {
 public:
  explicit NormalizedTag(std::string_view raw,
                         NormalizationMode mode = NormalizationMode::kPreserve)
      : value_(normalize_text(raw, mode)) {
    if (value_.empty()) {
      throw RejectedRecord("tag is empty after trimming");
    }
  }

  const std::string& value() const noexcept { return value_; }
  std::string_view view() const noexcept { return value_; }

  friend bool operator==(const NormalizedTag&, const NormalizedTag&) = default;
  friend auto operator<=>(const NormalizedTag&, const NormalizedTag&) = default;

  friend std::ostream& operator<<(std::ostream& os, const NormalizedTag& t) {
    return os << t.value_;
  }

 private:
  std::string value_;
};

inline NormalizedTag normalize_tag(std::string_view raw,
                                   NormalizationMode mode =
                                       NormalizationMode::kPreserve) {
  return NormalizedTag(raw, mode);
}

using ResourceId = std::string;
using AuthorId = std::string;

}  // namespace tagground

template <>
struct std::hash<tagground::NormalizedTag> {
  std::size_t operator()(const tagground::NormalizedTag& t) const noexcept {
    return std::hash<std::string>{}(t.value());
  }
};
