// dsrc/tensor.hpp
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
//
// Named f32 tensors and their container file format. Insertion order is
// preserved so that load followed by save is byte-identical.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dsrc/common.hpp"
#include "dsrc/io.hpp"

namespace dsrc {

struct Tensor {
  std::vector<int> shape;
  std::vector<float> values;  // row-major

  std::size_t numel() const { return values.size(); }
};

inline Tensor make_tensor(std::vector<int> shape) {
  std::size_t n = 1;
  for (int d : shape) {
    DSRC_CHECK(d >= 1, "tensor: nonpositive dimension ", d);
    n *= static_cast<std::size_t>(d);
  }
  Tensor t;
  t.shape = std::move(shape);
  t.values.assign(n, 0.0f);
  return t;
}

inline std::string shape_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

class WeightMap {
 public:
  Tensor& add(const std::string& name, std::vector<int> shape) {
    DSRC_CHECK(find(name) == nullptr, "weights: duplicate tensor \"", name,
               "\"");
    items_.emplace_back(name, make_tensor(std::move(shape)));
    return items_.back().second;
  }

  const Tensor* find(const std::string& name) const {
    for (const auto& [n, t] : items_)
      if (n == name) return &t;
    return nullptr;
  }
  Tensor* find(const std::string& name) {
    for (auto& [n, t] : items_)
      if (n == name) return &t;
    return nullptr;
  }

  // Tensor that must exist with exactly this shape.
  const Tensor& expect(const std::string& name,
                       const std::vector<int>& shape) const {
    const Tensor* t = find(name);
    DSRC_CHECK_DIM(t != nullptr, "weights: missing tensor \"", name, "\"");
    DSRC_CHECK_DIM(t->shape == shape, "weights: tensor \"", name,
                   "\" has shape ", shape_string(t->shape), ", expected ",
                   shape_string(shape));
    return *t;
  }

  const std::vector<std::pair<std::string, Tensor>>& items() const {
    return items_;
  }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<std::pair<std::string, Tensor>> items_;
};

// Weight file: magic "WGTS", version u8, tensor count u32 LE, then per
// tensor: name length u16 LE + UTF-8 name, rank u8, dims u32 LE x rank,
// payload f32 LE row-major.
inline std::vector<std::uint8_t> serialize_weights(const WeightMap& w) {
  detail::ByteWriter out;
  out.put_raw("WGTS", 4);
  out.put_u8(1);
  out.put_u32(static_cast<std::uint32_t>(w.size()));
  for (const auto& [name, t] : w.items()) {
    out.put_u16(static_cast<std::uint16_t>(name.size()));
    out.put_raw(name.data(), name.size());
    out.put_u8(static_cast<std::uint8_t>(t.shape.size()));
    for (int d : t.shape) out.put_u32(static_cast<std::uint32_t>(d));
    for (float v : t.values) out.put_f32(v);
  }
  return out.bytes;
}

inline WeightMap parse_weights(const std::vector<std::uint8_t>& bytes,
                               const std::string& label) {
  detail::ByteReader r(bytes, "WGTS " + label);
  r.expect_magic("WGTS");
  const int version = r.get_u8();
  DSRC_CHECK_FMT(version == 1, "WGTS ", label, ": unsupported version ",
                 version);
  const std::uint32_t count = r.get_u32();
  WeightMap w;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t name_len = r.get_u16();
    std::string name(name_len, '\0');
    r.get_raw(name.data(), name_len);
    const int rank = r.get_u8();
    DSRC_CHECK_FMT(rank >= 1, "WGTS ", label, ": tensor \"", name,
                   "\" has rank 0");
    std::vector<int> shape(rank);
    for (int d = 0; d < rank; ++d) {
      shape[d] = static_cast<int>(r.get_u32());
      DSRC_CHECK_FMT(shape[d] >= 1, "WGTS ", label, ": tensor \"", name,
                     "\" has a zero dimension");
    }
    Tensor& t = w.add(name, shape);
    for (auto& v : t.values) v = r.get_f32();
  }
  DSRC_CHECK_FMT(r.remaining() == 0, "WGTS ", label, ": trailing bytes");
  return w;
}

inline void save_weights(const std::string& path, const WeightMap& w) {
  detail::write_file(path, serialize_weights(w));
}

inline WeightMap load_weights(const std::string& path) {
  return parse_weights(detail::read_file(path), path);
}

}  // namespace dsrc
