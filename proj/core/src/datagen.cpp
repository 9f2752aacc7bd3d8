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

#include "pcc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pcc {

// ------------------------------------------------------------------ programs

std::vector<Statement> valid_statements(std::span<const Kind> kinds) {
  std::vector<Statement> out;
  const int m = static_cast<int>(kinds.size());
  for (int f = 0; f < kNumFunctions; ++f) {
    const FunctionClass& fc = function_class(f);
    if (fc.arity() == 1) {
      for (int a = 0; a < m; ++a)
        if (kinds[static_cast<std::size_t>(a)] == fc.operand(0)) out.push_back(make_statement(f, a));
    } else {
      for (int a = 0; a < m; ++a) {
        if (kinds[static_cast<std::size_t>(a)] != fc.operand(0)) continue;
        for (int b = 0; b < m; ++b)
          if (kinds[static_cast<std::size_t>(b)] == fc.operand(1)) out.push_back(make_statement(f, a, b));
      }
    }
  }
  return out;
}

Program sample_program(int length, Rng& rng) {
  const int n = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<Kind> inputs(static_cast<std::size_t>(n));
  do {
    for (Kind& k : inputs) k = rng.uniform_int(0, 1) == 0 ? Kind::Int : Kind::List;
  } while (std::find(inputs.begin(), inputs.end(), Kind::List) == inputs.end());
  return sample_program(inputs, length, rng);
}

Program sample_program(std::span<const Kind> inputs, int length, Rng& rng) {
  if (length < 1) throw Error(Errc::InvalidArgument, "program length must be >= 1");
  Program p;
  p.inputs.assign(inputs.begin(), inputs.end());
  std::vector<Kind> kinds = p.inputs;
  for (int i = 0; i < length; ++i) {
    const auto candidates = valid_statements(kinds);
    if (candidates.empty()) throw Error(Errc::InvalidArgument, "no type-valid statement for these inputs");
    const auto pick = rng.uniform_int(0, static_cast<long long>(candidates.size()) - 1);
    const Statement& s = candidates[static_cast<std::size_t>(pick)];
    p.statements.push_back(s);
    kinds.push_back(s.fn().result());
  }
  return p;
}

bool has_redundant_variables(const Program& program) {
  const int n = program.num_inputs();
  const int total = n + program.length();
  if (program.length() == 0) return true;
  std::vector<bool> used(static_cast<std::size_t>(total), false);
  used.back() = true;
  for (int i = program.length() - 1; i >= 0; --i) {
    if (!used[static_cast<std::size_t>(n + i)]) continue;
    const Statement& s = program.statements[static_cast<std::size_t>(i)];
    for (int j = 0; j < s.arity(); ++j) used[s.operands[static_cast<std::size_t>(j)]] = true;
  }
  return std::find(used.begin(), used.end(), false) != used.end();
}

// ------------------------------------------------------------------ signatures

namespace {

constexpr std::uint64_t kProbeSeed = 0x50726f6265426e6bULL;

std::vector<int> random_ints(Rng& rng, int count, int lo, int hi) {
  std::vector<int> xs(static_cast<std::size_t>(count));
  for (int& x : xs) x = static_cast<int>(rng.uniform_int(lo, hi));
  return xs;
}

Value probe_list(Rng& rng, int probe) {
  switch (probe) {
    case 0: return Value::list(std::span<const int>());
    case 1: return Value::list(random_ints(rng, 1, -10, 10));
    case 2: return Value::list(random_ints(rng, kMaxListLength, -10, 10));
    case 3: {
      auto xs = random_ints(rng, 8, 0, 2);
      for (int& x : xs) x = x * 3 - 2;  // duplicates from {-2, 1, 4}
      return Value::list(xs);
    }
    case 4: return Value::list(random_ints(rng, 6, -20, -1));
    case 5: return Value::list(random_ints(rng, kMaxListLength, -64, 63));
    case 6: return Value::list(random_ints(rng, 2, 0, 5));
    default: {
      const int len = static_cast<int>(rng.uniform_int(1, 12));
      const int range = probe >= 13 ? 100 : 16;
      return Value::list(random_ints(rng, len, -range, range));
    }
  }
}

Value probe_int(Rng& rng, int probe) {
  static constexpr int kFixed[kProbesPerSignature] = {0, 1, 2, -1, 3, 5, -3, 7, 10, 4, 6, -5, 12, 19, 30, -20};
  (void)rng;
  return Value::integer(kFixed[probe]);
}

std::vector<std::vector<Value>> build_probes(std::span<const Kind> inputs) {
  std::uint64_t code = inputs.size();
  for (Kind k : inputs) code = code * 3 + static_cast<std::uint64_t>(k) + 1;
  Rng rng(derive_seed(kProbeSeed, code));
  std::vector<std::vector<Value>> probes;
  for (int p = 0; p < kProbesPerSignature; ++p) {
    std::vector<Value> probe;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      // Rotate the special cases across inputs so multi-input probes mix them.
      const int variant = (p + static_cast<int>(i) * 5) % kProbesPerSignature;
      probe.push_back(inputs[i] == Kind::Int ? probe_int(rng, variant) : probe_list(rng, variant));
    }
    probes.push_back(std::move(probe));
  }
  return probes;
}

using ProbeTable = std::map<std::vector<Kind>, std::vector<std::vector<Value>>>;

ProbeTable build_probe_table() {
  ProbeTable table;
  for (int n = 1; n <= 3; ++n) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<Kind> kinds;
      for (int i = 0; i < n; ++i) kinds.push_back((mask >> i) & 1 ? Kind::List : Kind::Int);
      table.emplace(kinds, build_probes(kinds));
    }
  }
  return table;
}

}  // namespace

const std::vector<std::vector<Value>>& probe_bank(std::span<const Kind> inputs) {
  static const ProbeTable table = build_probe_table();
  const auto it = table.find(std::vector<Kind>(inputs.begin(), inputs.end()));
  if (it == table.end()) throw Error(Errc::InvalidArgument, "programs take 1..3 inputs");
  return it->second;
}

std::uint64_t semantic_signature(const Program& program, std::span<const std::vector<Value>> probes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  };
  for (const auto& probe : probes) {
    const auto out = run_program(program, probe);
    mix(out ? out->hash() : 0xfa11edULL);
  }
  return h;
}

std::uint64_t semantic_signature(const Program& program) {
  return semantic_signature(program, probe_bank(program.inputs));
}

// ------------------------------------------------------------------ bounds

void IntervalConstraint::meet(const IntervalConstraint& other) {
  lo = std::max(lo, other.lo);
  hi = std::min(hi, other.hi);
  max_len = std::min(max_len, other.max_len);
}

namespace {

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

// Hull of {x in domain : f(x) in [lo, hi]} for a unary integer lambda.
IntervalConstraint preimage_hull(Lambda lam, int lo, int hi) {
  IntervalConstraint c{kMaxInt + 1, kMinInt - 1, kMaxListLength};
  for (int x = kMinInt; x <= kMaxInt; ++x) {
    const int arg[] = {x};
    const long long y = eval_lambda(lam, arg).value;
    if (y >= lo && y <= hi) {
      c.lo = std::min(c.lo, x);
      c.hi = std::max(c.hi, x);
    }
  }
  return c;
}

IntervalConstraint elements(int lo, int hi) { return {lo, hi, kMaxListLength}; }

int isqrt(int x) { return x <= 0 ? 0 : static_cast<int>(std::floor(std::sqrt(static_cast<double>(x)))); }

}  // namespace

Outcome<std::vector<IntervalConstraint>> propagate_bounds(const Program& program) {
  const int n = program.num_inputs();
  std::vector<IntervalConstraint> c(static_cast<std::size_t>(n + program.length()));

  for (int i = program.length() - 1; i >= 0; --i) {
    const Statement& s = program.statements[static_cast<std::size_t>(i)];
    const FunctionClass& fc = s.fn();
    const IntervalConstraint out = c[static_cast<std::size_t>(n + i)];
    if (out.empty()) return Errc::Infeasible;
    IntervalConstraint& a = c[s.operands[0]];
    IntervalConstraint& b = c[s.operands[fc.arity() == 2 ? 1 : 0]];
    switch (fc.op) {
      case Operator::Head:
      case Operator::Last:
      case Operator::Minimum:
      case Operator::Maximum:
      case Operator::Filter:
        a.meet(elements(out.lo, out.hi));
        break;
      case Operator::Access:
        a.meet({0, kMaxListLength - 1, kMaxListLength});
        b.meet(elements(out.lo, out.hi));
        break;
      case Operator::Take:
      case Operator::Drop:
        a.meet({0, kMaxListLength, kMaxListLength});
        b.meet(elements(out.lo, out.hi));
        break;
      case Operator::Reverse:
      case Operator::Sort:
        a.meet(out);
        break;
      case Operator::Sum: {
        const int len = std::max(1, a.max_len);
        a.meet(elements(ceil_div(out.lo, len), floor_div(out.hi, len)));
        break;
      }
      case Operator::Count:
        break;
      case Operator::Map: {
        IntervalConstraint pre = preimage_hull(*fc.lambda, out.lo, out.hi);
        pre.max_len = out.max_len;
        a.meet(pre);
        break;
      }
      case Operator::ZipWith:
        switch (*fc.lambda) {
          case Lambda::Add:
            a.meet(elements(ceil_div(out.lo, 2), floor_div(out.hi, 2)));
            b.meet(elements(ceil_div(out.lo, 2), floor_div(out.hi, 2)));
            break;
          case Lambda::Sub:
            a.meet(elements(ceil_div(out.lo, 2), floor_div(out.hi, 2)));
            b.meet(elements(-floor_div(out.hi, 2), -ceil_div(out.lo, 2)));
            break;
          case Lambda::Mul: {
            const int m = out.lo <= 0 && out.hi >= 0 ? isqrt(std::min(-out.lo, out.hi))
                                                     : isqrt(std::max(std::abs(out.lo), std::abs(out.hi)));
            a.meet(elements(-m, m));
            b.meet(elements(-m, m));
            break;
          }
          default:
            a.meet(elements(out.lo, out.hi));
            b.meet(elements(out.lo, out.hi));
            break;
        }
        break;
      case Operator::ScanL1:
        switch (*fc.lambda) {
          case Lambda::Add:
          case Lambda::Sub: {
            const int len = std::max(1, std::min(a.max_len, out.max_len));
            a.meet({ceil_div(out.lo, len), floor_div(out.hi, len), out.max_len});
            break;
          }
          case Lambda::Mul: {
            constexpr int kScanMulLength = 7;
            const int bound = std::min(std::abs(out.lo), std::abs(out.hi));
            const int m = static_cast<int>(std::floor(std::pow(std::max(bound, 1), 1.0 / kScanMulLength)));
            a.meet({-m, m, std::min(out.max_len, kScanMulLength)});
            break;
          }
          default:
            a.meet(out);
            break;
        }
        break;
    }
    if (a.empty() || b.empty()) return Errc::Infeasible;
  }

  std::vector<IntervalConstraint> inputs(c.begin(), c.begin() + n);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].empty()) return Errc::Infeasible;
    if (program.inputs[i] == Kind::List && inputs[i].max_len < 1) return Errc::Infeasible;
  }
  return inputs;
}

Outcome<std::vector<Example>> sample_inputs(const Program& program, std::span<const IntervalConstraint> constraints,
                                            int k, Rng& rng) {
  if (constraints.size() != program.inputs.size()) throw Error(Errc::InvalidArgument, "constraint count mismatch");
  std::vector<Example> examples;
  int rejected = 0;
  while (static_cast<int>(examples.size()) < k) {
    std::vector<Value> inputs;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const IntervalConstraint& c = constraints[i];
      if (program.inputs[i] == Kind::Int) {
        inputs.push_back(Value::integer(static_cast<int>(rng.uniform_int(c.lo, c.hi))));
      } else {
        const int len = static_cast<int>(rng.uniform_int(1, std::max(1, c.max_len)));
        std::vector<int> xs(static_cast<std::size_t>(len));
        for (int& x : xs) x = static_cast<int>(rng.uniform_int(c.lo, c.hi));
        inputs.push_back(Value::list(xs));
      }
    }
    const bool duplicate = std::any_of(examples.begin(), examples.end(),
                                       [&](const Example& ex) { return ex.inputs == inputs; });
    auto out = duplicate ? Outcome<Value>(Errc::Malformed) : run_program(program, inputs);
    if (!out) {
      if (++rejected >= kInputRetryBudget) return Errc::GenerationFailed;
      continue;
    }
    examples.push_back({std::move(inputs), *out});
  }
  return examples;
}

// ------------------------------------------------------------------ corpus

Dataset build_dataset(const DatasetConfig& config) {
  if (config.count < 0 || config.min_len < 1 || config.max_len < config.min_len || config.k < 1)
    throw Error(Errc::InvalidArgument, "bad dataset config");
  Dataset data;
  data.manifest = {1, config.max_len, config.k, config.seed};
  std::unordered_set<std::uint64_t> seen;
  Rng rng(config.seed);

  const long long max_attempts = 10000LL * std::max(1, config.count) + 100000;
  long long attempts = 0;
  while (static_cast<int>(data.records.size()) < config.count) {
    if (++attempts > max_attempts) throw Error(Errc::GenerationFailed, "could not fill the requested corpus");
    const int len = static_cast<int>(rng.uniform_int(config.min_len, config.max_len));
    Program p = sample_program(len, rng);
    if (has_redundant_variables(p)) continue;
    const std::uint64_t sig = semantic_signature(p);
    if (seen.contains(sig) || (config.exclude && config.exclude->contains(sig))) continue;
    auto bounds = propagate_bounds(p);
    if (!bounds) continue;
    auto examples = sample_inputs(p, *bounds, config.k, rng);
    if (!examples) continue;
    seen.insert(sig);
    data.records.push_back({std::move(p), std::move(*examples)});
  }
  return data;
}

std::unordered_set<std::uint64_t> corpus_signatures(const Dataset& dataset) {
  std::unordered_set<std::uint64_t> sigs;
  for (const auto& r : dataset.records) sigs.insert(semantic_signature(r.program));
  return sigs;
}

bool validate_record(const DatasetRecord& record) {
  if (!record.program.well_formed() || record.examples.empty()) return false;
  for (const Example& ex : record.examples) {
    auto out = run_program(record.program, ex.inputs);
    if (!out || !(*out == ex.output)) return false;
  }
  return true;
}

// ------------------------------------------------------------------ training rows

Outcome<std::vector<TrainingRow>> make_training_rows(const DatasetRecord& record, const StatementVocabulary& vocab) {
  const Program& p = record.program;
  const int n = p.num_inputs();
  const int v = vocab.slots();
  if (n > v) return Errc::TooManyLiveVars;

  // last_use[id] = index of the last statement reading creation index id.
  std::vector<int> last_use(static_cast<std::size_t>(n + p.length()), -1);
  for (int i = 0; i < p.length(); ++i) {
    const Statement& s = p.statements[static_cast<std::size_t>(i)];
    for (int j = 0; j < s.arity(); ++j) last_use[s.operands[static_cast<std::size_t>(j)]] = i;
  }

  Environment env = Environment::create(record.examples, v);
  std::vector<int> slot_of(static_cast<std::size_t>(n + p.length()), -1);
  for (int i = 0; i < n; ++i) slot_of[static_cast<std::size_t>(i)] = i;

  std::vector<TrainingRow> rows;
  rows.reserve(static_cast<std::size_t>(p.length()));
  for (int i = 0; i < p.length(); ++i) {
    const Statement& s = p.statements[static_cast<std::size_t>(i)];
    TrainingRow row{env, 0, s.function, std::vector<std::uint8_t>(static_cast<std::size_t>(v), 0),
                    std::vector<std::uint8_t>(static_cast<std::size_t>(v), 0)};
    int drop_slot = -1;
    for (int slot = 0; slot < v; ++slot) {
      if (!env.live(slot)) continue;
      row.drop_mask[static_cast<std::size_t>(slot)] = 1;
      const bool dead = last_use[static_cast<std::size_t>(env.origin(slot))] < i;
      row.drop_labels[static_cast<std::size_t>(slot)] = dead ? 1 : 0;
      if (dead && drop_slot < 0) drop_slot = slot;
    }
    if (!env.full()) drop_slot = -1;
    else if (drop_slot < 0) return Errc::TooManyLiveVars;

    Statement rewritten = s;
    for (int j = 0; j < s.arity(); ++j)
      rewritten.operands[static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>(slot_of[s.operands[static_cast<std::size_t>(j)]]);
    row.next_statement = vocab.index_of(rewritten);

    auto next = env.step(rewritten, drop_slot);
    if (!next) return Errc::Malformed;
    rows.push_back(std::move(row));
    env = std::move(*next);
    slot_of[static_cast<std::size_t>(n + i)] = env.newest_slot();
  }
  return rows;
}

}  // namespace pcc
