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

// Writes He-initialized VGG16 weights in the SRQEWGT1 format. Lets the
// pipeline and its tests run without the exported pretrained weights.

#include <iostream>

#include <CLI11.hpp>

#include "srqe/errors.hpp"
#include "srqe/vgg.hpp"
#include "srqe/weights.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate random VGG16 weights"};
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out, "Output file")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    srqe::save_weights(out, srqe::random_vgg16_weights(seed));
  } catch (const srqe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return srqe::exit_code(e.kind());
  }
  return 0;
}
