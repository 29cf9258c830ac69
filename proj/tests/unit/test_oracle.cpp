// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fixtures.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace ompt;

TEST_CASE("sparsest_solution", "[oracle]") {
  SECTION("single orthonormal atom") {
    const auto dict = fixtures::identity(5);
    const auto s = sparsest_solution(dict, dict.atom(2), 2);
    REQUIRE(s.signal);
    CHECK(s.sparsity == 1u);
    CHECK(s.unique);
    CHECK(s.signal->support().indices() == std::vector<std::size_t>{2});
    CHECK(s.residual_norm <= 1e-15);
  }
  SECTION("zero signal") {
    const auto s = sparsest_solution(fixtures::identity(5), Vector::Zero(5), 2);
    REQUIRE(s.signal);
    CHECK(s.sparsity == 0u);
    CHECK(s.unique);
  }
  SECTION("planted 2-sparse on a random 6x10") {
    const auto dict = fixtures::gaussian(6, 10, 31);
    REQUIRE(verify_spark_condition(dict, 2));
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
      const auto sig = generate_sparse_signal(10, 2, UniformSymmetric{}, rng);
      const auto s = sparsest_solution(dict, dict.matrix() * sig.dense(), 3);
      REQUIRE(s.signal);
      CHECK(s.sparsity == 2u);
      CHECK(s.unique);
      CHECK(s.signal->support().same_members(sig.support()));
      CHECK((s.signal->dense() - sig.dense()).norm() <= 1e-10);
    }
  }
  SECTION("duplicate atoms make the answer ambiguous") {
    const auto dict = fixtures::identity_with_duplicate(4, 1);
    const auto s = sparsest_solution(dict, dict.atom(1), 2);
    REQUIRE(s.signal);
    CHECK(s.sparsity == 1u);
    CHECK_FALSE(s.unique);
  }
  SECTION("nothing within k_max") {
    const auto dict = fixtures::identity(4);
    const auto s = sparsest_solution(dict, Vector::Ones(4), 2);
    CHECK_FALSE(s.signal);
    CHECK_FALSE(s.sparsity);
    CHECK(s.residual_norm > 0.0);
  }
  REQUIRE_THROWS_KIND(sparsest_solution(fixtures::gaussian(20, 60, 1), Vector::Ones(20), 6),
                      ErrorKind::EnumerationBudgetExceeded);
}

TEST_CASE("verify_spark_condition", "[oracle]") {
  CHECK(verify_spark_condition(fixtures::identity(6), 3));
  CHECK_FALSE(verify_spark_condition(fixtures::identity_with_duplicate(6, 2), 1));
  const auto dict = fixtures::gaussian(8, 12, 2);
  const bool ok = verify_spark_condition(dict, 2);
  bool ref = true;
  oracle::subsets(12, 4, [&](const std::vector<std::size_t>& s) {
    if (oracle::min_singular_value(oracle::columns(dict.matrix(), s)) <= 1e-10) ref = false;
  });
  CHECK(ok == ref);
  CHECK(ok);
  CHECK_FALSE(verify_spark_condition(fixtures::gaussian(3, 8, 1), 2));
  REQUIRE_THROWS_KIND(verify_spark_condition(fixtures::identity(4), 3), ErrorKind::KOutOfRange);
}

TEST_CASE("spark condition implies the unique sparsest solution is the planted one", "[oracle][property]") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 6 + seed % 4;
    const auto dict = fixtures::gaussian(n, n + 3, 700 + seed);
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      if (k > 3 || !verify_spark_condition(dict, k)) continue;
      Rng rng(seed + 1000 * k);
      const auto sig = generate_sparse_signal(static_cast<std::size_t>(dict.cols()), k, UniformSymmetric{}, rng);
      const auto s = sparsest_solution(dict, dict.matrix() * sig.dense(), k);
      REQUIRE(s.signal);
      CHECK(s.unique);
      CHECK(s.signal->support().same_members(sig.support()));
      CHECK(s.residual_norm <= kOracleDefaultTol * (dict.matrix() * sig.dense()).norm());
      ++checked;
    }
  }
  CHECK(checked > 60);
}
