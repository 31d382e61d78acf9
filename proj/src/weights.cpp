// Copyright 2026 The SRQE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srqe/weights.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "srqe/binary_io.hpp"
#include "srqe/errors.hpp"

namespace srqe {

namespace {
constexpr char kMagic[9] = "SRQEWGT1";
}

std::size_t Tensor::element_count() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t a, std::uint32_t b) { return a * b; });
}

void WeightBundle::insert(std::string name, Tensor tensor) {
  if (tensor.element_count() != tensor.data.size()) {
    throw InvalidInputError("tensor " + name + " payload does not match its shape");
  }
  tensors_[std::move(name)] = std::move(tensor);
}

const Tensor& WeightBundle::at(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw ConfigurationError("missing tensor: " + name);
  }
  return it->second;
}

WeightBundle load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open weight file: " + path.string());
  }
  binary::expect_magic(in, kMagic, path.string());
  const auto count = binary::read_le<std::uint32_t>(in, "tensor count");
  WeightBundle bundle;
  for (std::uint32_t t = 0; t < count; ++t) {
    const auto name_len = binary::read_le<std::uint16_t>(in, "name length");
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) {
      throw DecodeError("truncated tensor name in " + path.string());
    }
    const auto ndim = binary::read_le<std::uint8_t>(in, "ndim of " + name);
    Tensor tensor;
    for (int d = 0; d < ndim; ++d) {
      tensor.dims.push_back(binary::read_le<std::uint32_t>(in, "dims of " + name));
    }
    tensor.data.resize(tensor.element_count());
    binary::read_f32_array(in, tensor.data.data(), tensor.data.size(), "payload of " + name);
    for (float v : tensor.data) {
      if (!std::isfinite(v)) {
        throw DecodeError("non-finite value in tensor " + name);
      }
    }
    bundle.insert(std::move(name), std::move(tensor));
  }
  return bundle;
}

void save_weights(const std::filesystem::path& path, const WeightBundle& bundle) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidInputError("cannot write weight file: " + path.string());
  }
  out.write(kMagic, 8);
  binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(bundle.size()));
  for (const auto& [name, tensor] : bundle.tensors()) {
    binary::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    binary::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(tensor.dims.size()));
    for (auto d : tensor.dims) {
      binary::write_le<std::uint32_t>(out, d);
    }
    binary::write_f32_array(out, tensor.data.data(), tensor.data.size());
  }
  if (!out) {
    throw InvalidInputError("write failed: " + path.string());
  }
}

}  // namespace srqe
