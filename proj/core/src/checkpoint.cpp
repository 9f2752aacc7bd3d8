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

#include "pcc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace pcc {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'C', 'K'};
constexpr std::uint32_t kMaxMetadata = 1u << 20;
constexpr std::uint32_t kMaxName = 256;

void put_u32(std::ostream& out, std::uint32_t x) {
  const char bytes[4] = {static_cast<char>(x & 0xff), static_cast<char>((x >> 8) & 0xff),
                         static_cast<char>((x >> 16) & 0xff), static_cast<char>((x >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw Error(Errc::CorruptFile, "truncated checkpoint");
  return static_cast<std::uint32_t>(bytes[0]) | static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 | static_cast<std::uint32_t>(bytes[3]) << 24;
}

std::string get_bytes(std::istream& in, std::uint32_t n) {
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw Error(Errc::CorruptFile, "truncated checkpoint");
  return s;
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << x;
  return os.str();
}

}  // namespace

void save_checkpoint(std::ostream& out, const GuideModelParams& params, HeadFlags heads) {
  const ModelShape& shape = params.shape();
  const StatementVocabulary vocab = build_vocabulary(shape.slots);
  const nlohmann::json meta = {{"v", shape.slots},
                               {"d", shape.embed_dim},
                               {"statements", vocab.size()},
                               {"vocabulary_hash", hex(vocab.hash())},
                               {"var_units", shape.var_units},
                               {"block_layers", shape.block_layers},
                               {"block_units", shape.block_units},
                               {"block_out", shape.block_out},
                               {"function_head", heads.function_head},
                               {"drop_head", heads.drop_head}};
  const std::string meta_text = meta.dump();
  out.write(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(meta_text.size()));
  out.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));

  const auto& layout = params.layout();
  put_u32(out, static_cast<std::uint32_t>(layout.size()));
  for (std::size_t id = 0; id < layout.size(); ++id) {
    const TensorSpec& t = layout[id];
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    const bool vector = t.cols == 1;
    put_u32(out, vector ? 1 : 2);
    put_u32(out, static_cast<std::uint32_t>(t.rows));
    if (!vector) put_u32(out, static_cast<std::uint32_t>(t.cols));
    const auto m = params.tensor(static_cast<int>(id));
    for (int r = 0; r < t.rows; ++r)
      for (int c = 0; c < t.cols; ++c) put_u32(out, std::bit_cast<std::uint32_t>(m(r, c)));
  }
}

void save_checkpoint(const std::filesystem::path& path, const GuideModelParams& params, HeadFlags heads) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  save_checkpoint(out, params, heads);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

GuideModelParams load_checkpoint(std::istream& in, std::optional<int> expected_slots, CheckpointInfo* info) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error(Errc::CorruptFile, "bad magic");
  const std::uint32_t version = get_u32(in);
  if (version != kCheckpointVersion)
    throw Error(Errc::VersionMismatch, "checkpoint version " + std::to_string(version));
  const std::uint32_t meta_len = get_u32(in);
  if (meta_len > kMaxMetadata) throw Error(Errc::CorruptFile, "metadata too large");

  nlohmann::json meta;
  ModelShape shape;
  HeadFlags heads;
  std::string stored_hash;
  int stored_statements = 0;
  try {
    meta = nlohmann::json::parse(get_bytes(in, meta_len));
    shape.slots = meta.at("v").get<int>();
    shape.embed_dim = meta.at("d").get<int>();
    shape.var_units = meta.at("var_units").get<int>();
    shape.block_layers = meta.at("block_layers").get<int>();
    shape.block_units = meta.at("block_units").get<int>();
    shape.block_out = meta.at("block_out").get<int>();
    heads.function_head = meta.value("function_head", true);
    heads.drop_head = meta.value("drop_head", true);
    stored_statements = meta.at("statements").get<int>();
    stored_hash = meta.at("vocabulary_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, std::string("metadata: ") + e.what());
  }
  if (shape.slots < 1 || shape.slots > 64 || shape.embed_dim < 1 || shape.var_units < 1 || shape.block_layers < 1 ||
      shape.block_units < 1 || shape.block_out < 1)
    throw Error(Errc::CorruptFile, "implausible model dimensions");
  if (expected_slots && *expected_slots != shape.slots)
    throw Error(Errc::VocabMismatch,
                "checkpoint has v=" + std::to_string(shape.slots) + ", expected v=" + std::to_string(*expected_slots));
  const StatementVocabulary vocab = build_vocabulary(shape.slots);
  if (stored_statements != vocab.size() || stored_hash != hex(vocab.hash()))
    throw Error(Errc::VocabMismatch, "statement vocabulary differs from this build");

  GuideModelParams params(shape);
  const auto& layout = params.layout();
  if (get_u32(in) != layout.size()) throw Error(Errc::CorruptFile, "tensor count");
  for (std::size_t id = 0; id < layout.size(); ++id) {
    const TensorSpec& t = layout[id];
    const std::uint32_t name_len = get_u32(in);
    if (name_len > kMaxName || get_bytes(in, name_len) != t.name)
      throw Error(Errc::CorruptFile, "expected tensor " + t.name);
    const std::uint32_t ndim = get_u32(in);
    const bool vector = t.cols == 1;
    if (ndim != (vector ? 1u : 2u)) throw Error(Errc::CorruptFile, t.name + ": rank");
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = vector ? 1 : get_u32(in);
    if (rows != static_cast<std::uint32_t>(t.rows) || cols != static_cast<std::uint32_t>(t.cols))
      throw Error(Errc::CorruptFile, t.name + ": shape");
    auto m = params.tensor(static_cast<int>(id));
    for (int r = 0; r < t.rows; ++r)
      for (int c = 0; c < t.cols; ++c) m(r, c) = std::bit_cast<float>(get_u32(in));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(Errc::CorruptFile, "trailing bytes");
  if (info != nullptr) *info = {shape, heads};
  return params;
}

GuideModelParams load_checkpoint(const std::filesystem::path& path, std::optional<int> expected_slots,
                                 CheckpointInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  return load_checkpoint(in, expected_slots, info);
}

}  // namespace pcc
