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

#ifndef SRQE_WEIGHTS_HPP_
#define SRQE_WEIGHTS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace srqe {

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;  // row-major

  std::size_t element_count() const;
};

// Named tensors of the VGG16 convolution stack, e.g. "conv3_2.weight".
// Immutable once loaded; shared read-only between workers.
class WeightBundle {
 public:
  void insert(std::string name, Tensor tensor);
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  const Tensor& at(const std::string& name) const;
  const std::map<std::string, Tensor>& tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

 private:
  std::map<std::string, Tensor> tensors_;
};

// "SRQEWGT1" container:
//   magic (8 bytes) | u32 tensor count | per tensor: u16 name length, UTF-8
//   name, u8 ndim, ndim x u32 dims, row-major f32 payload. All little-endian.
WeightBundle load_weights(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const WeightBundle& bundle);

}  // namespace srqe

#endif  // SRQE_WEIGHTS_HPP_
