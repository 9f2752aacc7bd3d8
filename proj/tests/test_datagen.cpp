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

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "pcc/dataset_io.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"

using namespace pcc;

namespace {

// Hull of {x : every f in the chain keeps x in the domain}, by brute force.
std::pair<int, int> brute_hull(const std::vector<std::string>& chain) {
  int lo = 1000, hi = -1000;
  for (int x = kMinInt; x <= kMaxInt; ++x) {
    long long y = x;
    bool ok = true;
    for (const auto& lam : chain) {
      y = oracle::unary(lam, y);
      ok = ok && in_range(y);
    }
    if (ok) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return {lo, hi};
}

const Dataset& corpus_1000() {
  static const Dataset data = [] {
    DatasetConfig config;
    config.count = 1000;
    config.max_len = 4;
    config.k = 5;
    config.seed = 7;
    return build_dataset(config);
  }();
  return data;
}

}  // namespace

TEST(SampleProgram, ProducesWellFormedPrograms) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const int len = static_cast<int>(rng.uniform_int(1, 6));
    const Program p = sample_program(len, rng);
    ASSERT_TRUE(p.well_formed()) << format_program(p);
    EXPECT_EQ(p.length(), len);
    EXPECT_GE(p.num_inputs(), 1);
    EXPECT_LE(p.num_inputs(), 3);
    EXPECT_NE(std::find(p.inputs.begin(), p.inputs.end(), Kind::List), p.inputs.end());
  }
}

TEST(SampleProgram, LengthOneOverOneList) {
  Rng rng(2);
  const Kind list[] = {Kind::List};
  std::set<std::string> seen;
  for (int i = 0; i < 5000; ++i) seen.insert(format_program(sample_program(list, 1, rng)));
  EXPECT_EQ(seen.size(), oracle::valid_lines({true}).size());
}

TEST(SampleProgram, FunctionHistogramMatchesAnalyticLaw) {
  // Analytic law: input kinds uniform over signatures with a LIST (n uniform
  // in 1..3), then each statement uniform over the type-valid lines.
  std::map<std::string, double> expected;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<bool>> sigs;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<bool> kinds;
      for (int i = 0; i < n; ++i) kinds.push_back(((mask >> i) & 1) != 0);
      if (std::find(kinds.begin(), kinds.end(), true) != kinds.end()) sigs.push_back(kinds);
    }
    for (const auto& kinds : sigs) {
      const double p_sig = 1.0 / 3.0 / static_cast<double>(sigs.size());
      const auto first = oracle::valid_lines(kinds);
      for (const auto& l1 : first) {
        const double p1 = p_sig / static_cast<double>(first.size());
        expected[l1.fn.name()] += p1;
        auto next_kinds = kinds;
        next_kinds.push_back(l1.fn.result_is_list);
        const auto second = oracle::valid_lines(next_kinds);
        for (const auto& l2 : second) expected[l2.fn.name()] += p1 / static_cast<double>(second.size());
      }
    }
  }

  Rng rng(3);
  constexpr int kSamples = 100000;
  std::map<std::string, int> counts;
  for (int i = 0; i < kSamples; ++i)
    for (const Statement& s : sample_program(2, rng).statements) ++counts[s.fn().name()];
  for (const auto& [name, p] : expected) {
    const double want = p * kSamples;
    EXPECT_NEAR(counts[name], want, 0.1 * want) << name;
  }
}

TEST(Redundancy, SpecExamples) {
  EXPECT_TRUE(has_redundant_variables(parse_program("LIST|SORT,0|SUM,0")));
  EXPECT_FALSE(has_redundant_variables(parse_program("LIST|SORT,0|SUM,1")));
  EXPECT_TRUE(has_redundant_variables(parse_program("LIST;LIST|SUM,0")));
  EXPECT_FALSE(has_redundant_variables(parse_program("LIST;LIST|ZIPWITH,+,0,1|SUM,2")));
}

TEST(Signature, ProbeBankCoversEdgeCases) {
  const Kind list[] = {Kind::List};
  const auto& bank = probe_bank(list);
  ASSERT_EQ(bank.size(), static_cast<std::size_t>(kProbesPerSignature));
  bool empty = false, singleton = false, full = false, negative = false, duplicate = false;
  for (const auto& probe : bank) {
    const Value& v = probe[0];
    empty |= v.size() == 0;
    singleton |= v.size() == 1;
    full |= v.size() == kMaxListLength;
    std::set<int> distinct;
    for (int i = 0; i < v.size(); ++i) {
      negative |= v[i] < 0;
      distinct.insert(v[i]);
    }
    duplicate |= static_cast<int>(distinct.size()) < v.size();
  }
  EXPECT_TRUE(empty && singleton && full && negative && duplicate);
  EXPECT_EQ(&probe_bank(list), &probe_bank(list));
}

TEST(Signature, SpecExamples) {
  const Program rr = parse_program("LIST|REVERSE,0|REVERSE,1");
  const Program ss = parse_program("LIST|SORT,0|SORT,1");
  EXPECT_NE(semantic_signature(rr), semantic_signature(ss));
  EXPECT_EQ(semantic_signature(rr), semantic_signature(rr));
  EXPECT_NE(semantic_signature(parse_program("LIST|MAP,+1,0")), semantic_signature(parse_program("LIST|MAP,-1,0")));
  // Equivalent programs collide by construction.
  EXPECT_EQ(semantic_signature(parse_program("LIST|SORT,0|SORT,1")), semantic_signature(parse_program("LIST|SORT,0")));
  EXPECT_EQ(semantic_signature(parse_program("LIST|MAP,*2,0")), semantic_signature(parse_program("LIST|ZIPWITH,+,0,0")));
}

TEST(Bounds, SpecExamples) {
  const auto times4 = propagate_bounds(parse_program("LIST|MAP,*4,0"));
  ASSERT_TRUE(times4.ok());
  const auto [lo4, hi4] = brute_hull({"*4"});
  EXPECT_EQ((*times4)[0].lo, lo4);
  EXPECT_EQ((*times4)[0].hi, hi4);
  EXPECT_EQ(lo4, -64);
  EXPECT_EQ(hi4, 63);

  const auto rev = propagate_bounds(parse_program("LIST|REVERSE,0"));
  EXPECT_EQ((*rev)[0], (IntervalConstraint{kMinInt, kMaxInt, kMaxListLength}));

  const auto twice = propagate_bounds(parse_program("LIST|MAP,*2,0|MAP,*2,1"));
  const auto [lo2, hi2] = brute_hull({"*2", "*2"});
  EXPECT_EQ((*twice)[0].lo, lo2);
  EXPECT_EQ((*twice)[0].hi, hi2);
}

TEST(Bounds, EveryUnaryMapMatchesBruteForce) {
  for (const auto& lam : oracle::unary_lambdas()) {
    const auto b = propagate_bounds(parse_program("LIST|MAP," + lam + ",0"));
    ASSERT_TRUE(b.ok()) << lam;
    const auto [lo, hi] = brute_hull({lam});
    EXPECT_EQ((*b)[0].lo, lo) << lam;
    EXPECT_EQ((*b)[0].hi, hi) << lam;
  }
}

TEST(Bounds, ConstraintsStayInsideTheDomain) {
  Rng rng(4);
  int feasible = 0;
  for (int i = 0; i < 5000; ++i) {
    const Program p = sample_program(static_cast<int>(rng.uniform_int(1, 5)), rng);
    const auto b = propagate_bounds(p);
    if (!b) {
      EXPECT_EQ(b.fault(), Errc::Infeasible);
      continue;
    }
    ++feasible;
    ASSERT_EQ(b->size(), p.inputs.size());
    for (const auto& c : *b) {
      EXPECT_LE(kMinInt, c.lo);
      EXPECT_LE(c.lo, c.hi);
      EXPECT_LE(c.hi, kMaxInt);
      EXPECT_GE(c.max_len, 0);
      EXPECT_LE(c.max_len, kMaxListLength);
    }
  }
  EXPECT_GT(feasible, 4000);
}

TEST(SampleInputs, ExamplesExecute) {
  Rng rng(5);
  const Program p = parse_program("LIST|MAP,*4,0");
  const auto bounds = propagate_bounds(p);
  const auto examples = sample_inputs(p, *bounds, 5, rng);
  ASSERT_TRUE(examples.ok());
  ASSERT_EQ(examples->size(), 5u);
  for (const Example& ex : *examples) {
    EXPECT_GE(ex.inputs[0].size(), 1);
    EXPECT_EQ(run_program(p, ex.inputs).value(), ex.output);
  }
}

TEST(SampleInputs, BoundsReduceRejections) {
  const Program p = parse_program("LIST|MAP,*4,0|SUM,1");
  Rng rng(6);
  auto rejection_rate = [&](const IntervalConstraint& c) {
    int rejected = 0;
    for (int i = 0; i < 2000; ++i) {
      const int len = static_cast<int>(rng.uniform_int(1, c.max_len));
      std::vector<int> xs(static_cast<std::size_t>(len));
      for (int& x : xs) x = static_cast<int>(rng.uniform_int(c.lo, c.hi));
      const Value in[] = {Value::list(xs)};
      if (!run_program(p, in)) ++rejected;
    }
    return rejected / 2000.0;
  };
  const double loose = rejection_rate({kMinInt, kMaxInt, kMaxListLength});
  const double propagated = rejection_rate((*propagate_bounds(p))[0]);
  EXPECT_GT(loose, 0.9);
  EXPECT_LT(propagated, 0.05);

  const IntervalConstraint hopeless[] = {{100, 255, kMaxListLength}};
  EXPECT_EQ(sample_inputs(p, hopeless, 5, rng).fault(), Errc::GenerationFailed);
}

TEST(BuildDataset, DeterministicAndSound) {
  const Dataset& a = corpus_1000();
  DatasetConfig config;
  config.count = 1000;
  config.max_len = 4;
  config.k = 5;
  config.seed = 7;
  const Dataset b = build_dataset(config);
  std::ostringstream sa, sb;
  write_dataset(sa, a);
  write_dataset(sb, b);
  EXPECT_EQ(sa.str(), sb.str());

  ASSERT_EQ(a.records.size(), 1000u);
  std::set<std::uint64_t> sigs;
  std::map<int, int> lengths;
  for (const DatasetRecord& r : a.records) {
    EXPECT_TRUE(validate_record(r));
    EXPECT_FALSE(has_redundant_variables(r.program));
    EXPECT_EQ(r.examples.size(), 5u);
    sigs.insert(semantic_signature(r.program));
    ++lengths[r.program.length()];
    for (const Example& ex : r.examples) EXPECT_TRUE(trace_program(r.program, ex.inputs).ok());
  }
  EXPECT_EQ(sigs.size(), a.records.size());
  // Length is drawn uniformly; deduplication and redundancy pruning then
  // reshape the mix, so only presence of every length is asserted.
  for (int len = 1; len <= 4; ++len) EXPECT_GT(lengths[len], 20) << len;
}

TEST(BuildDataset, ExcludeKeepsCorporaDisjoint) {
  const auto train_sigs = corpus_signatures(corpus_1000());
  DatasetConfig config;
  config.count = 200;
  config.max_len = 4;
  config.min_len = 4;
  config.seed = 8;
  config.exclude = &train_sigs;
  const Dataset test = build_dataset(config);
  for (const DatasetRecord& r : test.records) {
    EXPECT_EQ(r.program.length(), 4);
    EXPECT_FALSE(train_sigs.contains(semantic_signature(r.program)));
  }
}

TEST(BuildDataset, DistinctSignaturesAreSeparatedByAProbe) {
  const auto& records = corpus_1000().records;
  Rng rng(9);
  int checked = 0;
  while (checked < 100) {
    const auto& a = records[static_cast<std::size_t>(rng.uniform_int(0, 999))];
    const auto& b = records[static_cast<std::size_t>(rng.uniform_int(0, 999))];
    if (&a == &b || a.program.inputs != b.program.inputs) continue;
    ++checked;
    bool separated = false;
    for (const auto& probe : probe_bank(a.program.inputs)) {
      const auto x = run_program(a.program, probe);
      const auto y = run_program(b.program, probe);
      if (x.ok() != y.ok() || (x.ok() && !(*x == *y))) separated = true;
    }
    EXPECT_TRUE(separated) << format_program(a.program) << " vs " << format_program(b.program);
  }
}

TEST(DatasetIo, RoundTripAndErrors) {
  std::stringstream ss;
  write_dataset(ss, corpus_1000());
  const Dataset back = read_dataset(ss);
  ASSERT_EQ(back.records.size(), 1000u);
  EXPECT_EQ(back.manifest.seed, 7u);
  EXPECT_EQ(back.records[17].program, corpus_1000().records[17].program);
  EXPECT_EQ(back.records[17].examples, corpus_1000().records[17].examples);

  std::stringstream bad_version("{\"version\":2,\"max_len\":4,\"k\":5,\"seed\":1}\n");
  try {
    read_dataset(bad_version);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::VersionMismatch);
  }
  std::stringstream garbage("{\"version\":1,\"max_len\":4,\"k\":5,\"seed\":1}\n{\"program\": 3}\n");
  EXPECT_THROW(read_dataset(garbage), Error);
  std::stringstream out_of_domain(
      "{\"version\":1,\"max_len\":4,\"k\":5,\"seed\":1}\n"
      "{\"program\":\"LIST|SUM,0\",\"examples\":[{\"inputs\":[[300]],\"output\":300}]}\n");
  EXPECT_THROW(read_dataset(out_of_domain), Error);
}

TEST(TrainingRows, OneRowPerStatement) {
  const StatementVocabulary vocab = build_vocabulary(8);
  DatasetRecord r{parse_program("LIST|SORT,0|MAP,*2,1|SUM,2"), {}};
  r.examples = testing_support::examples_of(r.program, {{Value::list({3, 1, 2})}, {Value::list({-1})}});
  const auto rows = make_training_rows(r, vocab);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 3u);
  const TrainingRow& first = (*rows)[0];
  EXPECT_EQ(first.env.live_count(), 1);
  EXPECT_EQ(first.next_statement, vocab.index_of(r.program.statements[0]));
  EXPECT_EQ(first.next_function, r.program.statements[0].function);
  EXPECT_EQ(first.drop_mask, (std::vector<std::uint8_t>{1, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(first.drop_labels[0], 0);
  // The input is not read after the first statement.
  EXPECT_EQ((*rows)[1].drop_labels[0], 1);
  EXPECT_EQ((*rows)[1].drop_labels[1], 0);
  EXPECT_EQ((*rows)[2].drop_labels, (std::vector<std::uint8_t>{1, 1, 0, 0, 0, 0, 0, 0}));
}

TEST(TrainingRows, LabelsMatchFutureUse) {
  const StatementVocabulary vocab = build_vocabulary(6);
  for (const DatasetRecord& r : corpus_1000().records) {
    const auto rows = make_training_rows(r, vocab);
    ASSERT_TRUE(rows.ok()) << format_program(r.program);
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const TrainingRow& row = (*rows)[i];
      EXPECT_EQ(vocab.entry_at(row.next_statement).function, row.next_function);
      for (int s = 0; s < 6; ++s) {
        EXPECT_EQ(row.drop_mask[static_cast<std::size_t>(s)], row.env.live(s) ? 1 : 0);
        if (!row.drop_labels[static_cast<std::size_t>(s)]) continue;
        const int origin = row.env.origin(s);
        for (std::size_t j = i; j < r.program.statements.size(); ++j) {
          const Statement& st = r.program.statements[j];
          for (int o = 0; o < st.arity(); ++o) EXPECT_NE(st.operands[static_cast<std::size_t>(o)], origin);
        }
      }
    }
  }
}

TEST(TrainingRows, LongProgramNeedsDropsAndReplays) {
  const StatementVocabulary vocab = build_vocabulary(8);
  Rng rng(10);
  const Kind kinds[] = {Kind::List, Kind::List, Kind::Int};
  int replayed = 0;
  for (int attempt = 0; attempt < 20000 && replayed < 5; ++attempt) {
    DatasetRecord r{sample_program(kinds, 9, rng), {}};
    const auto bounds = propagate_bounds(r.program);
    if (!bounds) continue;
    auto examples = sample_inputs(r.program, *bounds, 3, rng);
    if (!examples) continue;
    r.examples = std::move(*examples);
    const auto rows = make_training_rows(r, vocab);
    if (!rows) {
      EXPECT_EQ(rows.fault(), Errc::TooManyLiveVars);
      continue;
    }
    bool dropped = false;
    Environment env = (*rows)[0].env;
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const TrainingRow& row = (*rows)[i];
      EXPECT_EQ(env.fingerprint(), row.env.fingerprint());
      int drop = -1;
      if (env.full()) {
        dropped = true;
        for (int s = 0; s < 8 && drop < 0; ++s)
          if (row.drop_labels[static_cast<std::size_t>(s)]) drop = s;
      }
      const auto next = env.step(vocab.entry_at(row.next_statement), drop);
      ASSERT_TRUE(next.ok());
      env = *next;
    }
    ASSERT_TRUE(dropped);
    EXPECT_TRUE(env.solved());
    ++replayed;
  }
  EXPECT_EQ(replayed, 5);
}
