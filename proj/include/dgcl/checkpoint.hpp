// Copyright 2026 The DGCL Authors. All Rights Reserved.
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

#include <filesystem>

#include "dgcl/config.hpp"
#include "dgcl/params.hpp"

namespace dgcl {

// Two files per checkpoint:
//   <stem>.json  manifest: format tag, resolved config, item count, and one
//                entry {channel, name, rows, cols, offset} per tensor
//   <stem>.bin   every tensor's values as little-endian IEEE-754 doubles,
//                row-major, concatenated in manifest order; offsets count
//                doubles from the start of the file
struct Checkpoint {
  TrainConfig config;
  ParameterSet params;
};

inline constexpr const char* kCheckpointFormat = "dgcl-checkpoint-v1";

void save_checkpoint(const std::filesystem::path& stem, const TrainConfig& config, ParameterSet& params);
// Throws DataError on missing files, size mismatches, or unknown formats.
Checkpoint load_checkpoint(const std::filesystem::path& stem);

}  // namespace dgcl
