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

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ompt;
using Catch::Approx;

namespace {

double sqrtk(std::size_t k) { return std::sqrt(static_cast<double>(k)); }

}  // namespace

TEST_CASE("mutual_coherence", "[metrics]") {
  CHECK(mutual_coherence(fixtures::identity(5)) == 0.0);
  CHECK(mutual_coherence(fixtures::identity_with_duplicate(4, 3)) == Approx(1.0));

  const auto dict = build_identity_fourier_dictionary(128);
  const Matrix g = dict.matrix().transpose() * dict.matrix();
  double m = 0.0;
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(g(i, j)));
  CHECK(mutual_coherence(dict) == Approx(m).epsilon(1e-14));
  REQUIRE_THROWS_KIND(mutual_coherence(Dictionary::from_normalized(Matrix::Ones(1, 1))), ErrorKind::InvalidArgument);
}

TEST_CASE("global 2-coherence and cumulative coherence", "[metrics]") {
  const auto dict = fixtures::gaussian(6, 10, 21);
  CHECK(global_2_coherence(dict, 1) == mutual_coherence(dict));
  CHECK(cumulative_coherence(dict, 1) == Approx(mutual_coherence(dict)));
  CHECK(global_2_coherence(fixtures::identity(6), 4) == 0.0);
  CHECK(cumulative_coherence(fixtures::identity(6), 4) == 0.0);
  CHECK(global_2_coherence(dict, 3) == Approx(oracle::nu_exhaustive(dict.matrix(), 3)).epsilon(1e-13));
  CHECK(cumulative_coherence(dict, 3) == Approx(oracle::mu_exhaustive(dict.matrix(), 3)).epsilon(1e-13));
  REQUIRE_THROWS_KIND(global_2_coherence(dict, 0), ErrorKind::KOutOfRange);
  REQUIRE_THROWS_KIND(global_2_coherence(dict, 10), ErrorKind::KOutOfRange);
  REQUIRE_THROWS_KIND(cumulative_coherence(dict, 10), ErrorKind::KOutOfRange);
}

TEST_CASE("row-wise top-k matches exhaustive subsets", "[metrics][property]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 5;
    const std::size_t d = 6 + seed % 6;
    const auto dict = fixtures::gaussian(n, d, 500 + seed);
    for (std::size_t k = 1; k < d && binomial(d - 1, k) <= 100000; ++k) {
      CHECK(global_2_coherence(dict, k) == Approx(oracle::nu_exhaustive(dict.matrix(), k)).epsilon(1e-12));
      CHECK(cumulative_coherence(dict, k) == Approx(oracle::mu_exhaustive(dict.matrix(), k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("ric_exact", "[metrics]") {
  for (std::size_t k = 1; k <= 4; ++k) CHECK(ric_exact(fixtures::identity(4), k) == 0.0);
  CHECK(ric_exact(fixtures::identity_with_duplicate(4, 0), 2) == Approx(1.0));

  const auto dict = fixtures::gaussian(8, 12, 8);
  const double delta = ric_exact(dict, 2);
  CHECK(delta == Approx(oracle::ric_exhaustive(dict.matrix(), 2)).epsilon(1e-10));
  // The constant is tight: every sampled 2-sparse v respects it and some
  // subset attains it at an eigenvector.
  Rng rng(4);
  double tightest = 0.0;
  for (int s = 0; s < 2000; ++s) {
    const auto i = rng.uniform_index(12);
    auto j = rng.uniform_index(11);
    if (j >= i) ++j;
    Vector v = Vector::Zero(12);
    v[static_cast<Index>(i)] = rng.normal();
    v[static_cast<Index>(j)] = rng.normal();
    v.normalize();
    const double e = (dict.matrix() * v).squaredNorm();
    CHECK(e >= 1.0 - delta - 1e-12);
    CHECK(e <= 1.0 + delta + 1e-12);
    tightest = std::max(tightest, std::abs(e - 1.0));
  }
  CHECK(tightest <= delta + 1e-12);
  CHECK(tightest >= 0.5 * delta);

  REQUIRE_THROWS_KIND(ric_exact(dict, 9), ErrorKind::KOutOfRange);
  REQUIRE_THROWS_KIND(ric_exact(fixtures::gaussian(30, 60, 1), 8), ErrorKind::EnumerationBudgetExceeded);
}

TEST_CASE("omega_k", "[metrics]") {
  for (std::size_t k = 1; k <= 3; ++k) CHECK(omega_k(fixtures::identity(5), k) == Approx(1.0 / sqrtk(k)));
  CHECK(omega_k(fixtures::gaussian(6, 8, 3), 1) == Approx(1.0));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto dict = fixtures::gaussian(6, 8, 40 + seed);
    const double w = omega_k(dict, 2);
    CHECK(w == Approx(oracle::omega_variational(dict.matrix(), 2)).epsilon(1e-10));
    // Sampled points of the variational problem never undercut the minimum.
    Rng rng(seed);
    for (int s = 0; s < 500; ++s) {
      const auto i = rng.uniform_index(8);
      auto j = rng.uniform_index(7);
      if (j >= i) ++j;
      Vector x(2);
      x << rng.normal(), rng.normal();
      CHECK(oracle::omega_objective(dict.matrix(), {i, j}, x) >= w - 1e-12);
    }
  }

  try {
    (void)omega_k(fixtures::identity_with_duplicate(3, 1), 2);
    FAIL("expected SingularSubset");
  } catch (const SingularSubsetError& e) {
    CHECK(e.kind() == ErrorKind::SingularSubset);
    CHECK(e.witness() == std::vector<std::size_t>{1, 3});
  }
}

TEST_CASE("coherence_report", "[metrics]") {
  SECTION("orthonormal") {
    const auto r = coherence_report(fixtures::identity(6), 3, true, true);
    CHECK(r.kmax == 3);
    CHECK(r.mutual == 0.0);
    for (std::size_t k = 1; k <= 3; ++k) {
      CHECK(r.nu(k) == 0.0);
      CHECK(r.mu(k) == 0.0);
      CHECK(r.delta(k) == 0.0);
      CHECK(r.omega_at(k) == Approx(1.0 / sqrtk(k)));
    }
  }
  SECTION("missing metrics are reported") {
    const auto r = coherence_report(fixtures::identity(6), 3, false, false);
    CHECK_FALSE(r.has_delta(1));
    REQUIRE_THROWS_KIND(r.delta(1), ErrorKind::MissingMetric);
    REQUIRE_THROWS_KIND(r.omega_at(1), ErrorKind::MissingMetric);
    REQUIRE_THROWS_KIND(r.nu(4), ErrorKind::MissingMetric);
  }
  SECTION("random 8x12 satisfies both chains") {
    const auto dict = fixtures::gaussian(8, 12, 12);
    const auto r = coherence_report(dict, 4, true, true);
    for (std::size_t k = 1; k <= 3; ++k) {
      CHECK(r.mutual <= r.nu(k) + 1e-10);
      CHECK(r.nu(k) <= r.delta(k + 1) + 1e-10);
      CHECK(r.delta(k + 1) <= sqrtk(k) * r.nu(k) + 1e-10);
      CHECK(sqrtk(k) * r.nu(k) <= static_cast<double>(k) * r.mutual + 1e-10);
      CHECK(r.delta(k + 1) <= r.mu(k) + 1e-10);
      CHECK(r.mu(k) <= sqrtk(k) * r.nu(k) + 1e-10);
    }
  }
}

TEST_CASE("metric monotonicity and nonnegativity", "[metrics][property]") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 4 + seed % 4;
    const std::size_t d = 7 + seed % 5;
    const auto r = coherence_report(fixtures::gaussian(n, d, 900 + seed), std::min(n, d - 1), true, true);
    CHECK(r.nu(1) == r.mutual);
    for (std::size_t k = 1; k <= r.kmax; ++k) {
      CHECK(r.nu(k) >= 0.0);
      CHECK(r.mu(k) >= 0.0);
      CHECK(r.delta(k) >= 0.0);
      CHECK(r.omega_at(k) > 0.0);
      if (k > 1) {
        CHECK(r.nu(k) >= r.nu(k - 1));
        CHECK(r.mu(k) >= r.mu(k - 1));
        CHECK(r.delta(k) >= r.delta(k - 1) - 1e-12);
        CHECK(r.omega_at(k) <= r.omega_at(k - 1) + 1e-12);
      }
      // omega_k >= (1 - delta_k) / sqrt(k).
      if (r.delta(k) < 1.0) CHECK(r.omega_at(k) >= (1.0 - r.delta(k)) / sqrtk(k) - 1e-12);
    }
  }
}
