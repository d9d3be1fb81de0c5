// Copyright 2026 The Arena Audit Authors.
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

#include "arena/rng.hpp"

#include <set>
#include <vector>

#include "doctest.h"

using namespace arena;

TEST_CASE("same seed gives the same stream") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 1000; ++i) CHECK(a.NextU64() == b.NextU64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.NextU64() == b.NextU64();
  CHECK(same == 0);
}

TEST_CASE("NextIndex stays in range and covers all values") {
  Rng rng(7);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t v = rng.NextIndex(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("NextDouble is uniform-ish on [0,1)") {
  Rng rng(99);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.NextDouble();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("DeriveSeed decorrelates indices") {
  std::set<uint64_t> seeds;
  for (uint64_t i = 0; i < 1000; ++i) seeds.insert(DeriveSeed(42, i));
  CHECK(seeds.size() == 1000);
  CHECK(DeriveSeed(42, 7) == DeriveSeed(42, 7));
  CHECK(DeriveSeed(42, 7) != DeriveSeed(43, 7));
}

TEST_CASE("SampleIndices draws a sorted uniform subset") {
  Rng rng(5);
  const auto subset = rng.SampleIndices(100, 10);
  REQUIRE(subset.size() == 10);
  for (size_t i = 1; i < subset.size(); ++i) {
    CHECK(subset[i - 1] < subset[i]);
    CHECK(subset[i] < 100);
  }

  // Every index has inclusion probability m/n.
  std::vector<int> hits(20, 0);
  const int trials = 20000;
  Rng rng2(6);
  for (int t = 0; t < trials; ++t)
    for (size_t idx : rng2.SampleIndices(20, 5)) ++hits[idx];
  for (int h : hits)
    CHECK(static_cast<double>(h) / trials == doctest::Approx(0.25).epsilon(0.1));
}
