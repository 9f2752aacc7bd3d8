// Copyright 2026 The pcc Authors. All rights reserved.
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
#include <iosfwd>
#include <optional>

#include "pcc/model.hpp"

namespace pcc {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointInfo {
  ModelShape shape;
  HeadFlags heads;
};

// Layout: "PCCK", u32 version, u32 length + JSON metadata (v, d, |S|,
// vocabulary hash, block shape, heads), u32 tensor count, then per tensor
// u32 name length, name, u32 ndim, u32 dims, row-major little-endian f32.
void save_checkpoint(std::ostream& out, const GuideModelParams& params, HeadFlags heads = {});
void save_checkpoint(const std::filesystem::path& path, const GuideModelParams& params, HeadFlags heads = {});

// Errc::VersionMismatch, Errc::VocabMismatch (stored |S| or hash disagrees
// with the rebuilt vocabulary, or `expected_slots` differs), Errc::CorruptFile.
GuideModelParams load_checkpoint(std::istream& in, std::optional<int> expected_slots = std::nullopt,
                                 CheckpointInfo* info = nullptr);
GuideModelParams load_checkpoint(const std::filesystem::path& path, std::optional<int> expected_slots = std::nullopt,
                                 CheckpointInfo* info = nullptr);

}  // namespace pcc
