// dsrc/common.hpp
//
// Copyright 2026 The dsrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace dsrc {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A file could not be opened or read/written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// A file or byte stream is not in the expected format (bad magic,
// bad version, truncation, inconsistent counts).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Structurally valid inputs that do not fit together (dimension or
// vocabulary mismatches, missing tensors, incompatible configs).
class MismatchError : public Error {
 public:
  explicit MismatchError(const std::string& what) : Error(what) {}
};

namespace detail {

template <typename... Parts>
std::string str_cat(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace detail
}  // namespace dsrc

#define DSRC_CHECK(cond, ...)                                    \
  do {                                                           \
    if (!(cond)) throw ::dsrc::Error(::dsrc::detail::str_cat(__VA_ARGS__)); \
  } while (0)

#define DSRC_CHECK_FMT(cond, ...)                                \
  do {                                                           \
    if (!(cond))                                                 \
      throw ::dsrc::FormatError(::dsrc::detail::str_cat(__VA_ARGS__)); \
  } while (0)

#define DSRC_CHECK_DIM(cond, ...)                                \
  do {                                                           \
    if (!(cond))                                                 \
      throw ::dsrc::MismatchError(::dsrc::detail::str_cat(__VA_ARGS__)); \
  } while (0)
