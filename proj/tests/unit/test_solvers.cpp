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
#include "instances.hpp"
#include "oracles.hpp"

using namespace ompt;
using Catch::Approx;

namespace {

void check_result_shape(const RecoveryResult& r, const Dictionary& dict) {
  CHECK(r.iterations == r.support.size());
  CHECK(r.residual_norms.size() == r.iterations + 1);
  CHECK(r.estimate.size() == dict.cols());
  CHECK(static_cast<std::size_t>(r.coefficients.size()) == r.support.size());
  std::size_t nonzero_off_support = 0;
  for (Index i = 0; i < r.estimate.size(); ++i)
    if (!r.support.contains(static_cast<std::size_t>(i)) && r.estimate[i] != 0.0) ++nonzero_off_support;
  CHECK(nonzero_off_support == 0);
  for (std::size_t j = 0; j < r.support.size(); ++j)
    CHECK(r.estimate[static_cast<Index>(r.support[j])] == r.coefficients[static_cast<Index>(j)]);
  for (std::size_t s = 1; s < r.residual_norms.size(); ++s) CHECK(r.residual_norms[s] < r.residual_norms[s - 1]);
}

SolverOptions k_iterations(std::size_t k, std::uint64_t seed = 0) {
  SolverOptions o;
  o.max_iterations = k;
  o.residual_tolerance = 1e-12;
  o.rng_seed = seed;
  return o;
}

}  // namespace

TEST_CASE("ompt basics", "[solvers]") {
  const auto dict = fixtures::identity(6);
  SECTION("single exact atom") {
    for (double t : {0.05, 0.3, 0.9}) {
      const Vector f = dict.atom(3);
      const auto r = ompt::ompt(dict, f, t);
      check_result_shape(r, dict);
      CHECK(r.support.indices() == std::vector<std::size_t>{3});
      CHECK(r.coefficients[0] == Approx(1.0));
      CHECK(r.iterations == 1);
      CHECK(r.residual_norms.back() <= 1e-15);
      CHECK(r.stop_reason == StopReason::ResidualBelowThreshold);
    }
  }
  SECTION("zero signal") {
    const auto r = ompt::ompt(dict, Vector::Zero(6), 0.5);
    CHECK(r.iterations == 0);
    CHECK(r.inner_product_count == 0);
    CHECK(r.stop_reason == StopReason::ResidualBelowThreshold);
    CHECK(r.estimate == Vector::Zero(6));
  }
  SECTION("nothing qualifies") {
    // Every atom of [I | all-ones/sqrt(n)] sees 1/sqrt(6) of the residual.
    Matrix m(6, 7);
    m << Matrix::Identity(6, 6), Vector::Constant(6, 1.0 / std::sqrt(6.0));
    const auto d2 = Dictionary::from_normalized(m);
    Vector f(6);
    f << 1, -1, 1, -1, 1, -1;
    const auto r = ompt::ompt(d2, f, 0.5);
    CHECK(r.iterations == 0);
    CHECK(r.stop_reason == StopReason::NoIndexMeetsThreshold);
    CHECK(r.inner_product_count == 7);
  }
  SECTION("max iterations") {
    Vector f = Vector::Ones(6);
    SolverOptions o;
    o.max_iterations = 2;
    o.residual_tolerance = 0.0;
    const auto r = ompt::ompt(dict, f, 0.1, o);
    CHECK(r.iterations == 2);
    CHECK(r.stop_reason == StopReason::MaxIterations);
  }
  SECTION("fixed ascending order takes the first qualifying atom") {
    Vector f(6);
    f << 0.1, 0.5, 1.0, 0, 0, 0;
    SolverOptions o;
    o.scan_order = ScanOrder::FixedAscending;
    o.max_iterations = 1;
    const auto r = ompt::ompt(dict, f, 0.4, o);
    CHECK(r.support.indices() == std::vector<std::size_t>{1});
    CHECK(r.inner_product_count == 2);
  }
  SECTION("argument validation") {
    REQUIRE_THROWS_KIND(ompt::ompt(dict, Vector::Ones(6), 0.0), ErrorKind::TOutOfRange);
    REQUIRE_THROWS_KIND(ompt::ompt(dict, Vector::Ones(6), 1.0), ErrorKind::TOutOfRange);
    REQUIRE_THROWS_KIND(ompt::ompt(dict, Vector::Ones(5), 0.5), ErrorKind::InvalidArgument);
    SolverOptions o;
    o.max_iterations = 0;
    REQUIRE_THROWS_KIND(ompt::ompt(dict, Vector::Ones(6), 0.5, o), ErrorKind::InvalidArgument);
  }
}

TEST_CASE("omp basics", "[solvers]") {
  SECTION("inner product count k(2d-k+1)/2") {
    const auto dict = build_identity_fourier_dictionary(128);
    Rng rng(1);
    const auto sig = generate_sparse_signal(256, 10, UniformSymmetric{}, rng);
    const auto r = omp(dict, dict.matrix() * sig.dense(), 10);
    CHECK(r.iterations == 10);
    CHECK(r.inner_product_count == 2515);
  }
  SECTION("greedy order follows magnitudes") {
    const auto dict = fixtures::identity(5);
    Vector f = 2.0 * dict.atom(1) + dict.atom(2);
    const auto r = omp(dict, f, 2);
    check_result_shape(r, dict);
    CHECK(r.support.indices() == std::vector<std::size_t>{1, 2});
    CHECK(r.coefficients[0] == Approx(2.0));
    CHECK(r.coefficients[1] == Approx(1.0));
  }
  SECTION("ties go to the lower index") {
    const auto dict = fixtures::identity(4);
    const auto r = omp(dict, Vector::Ones(4), 1);
    CHECK(r.support.indices() == std::vector<std::size_t>{0});
  }
  SECTION("recovers under the mutual coherence condition, matching the l0 oracle") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto dict = instances::near_orthonormal(8, 0.05, seed);
      const double m = mutual_coherence(dict);
      for (std::size_t k = 1; k <= 3; ++k) {
        if (!(m < 1.0 / (2.0 * static_cast<double>(k) - 1.0))) continue;
        Rng rng(seed * 7 + k);
        const auto sig = generate_sparse_signal(8, k, UniformSymmetric{}, rng);
        const Vector f = dict.matrix() * sig.dense();
        const auto r = omp(dict, f, k);
        CHECK(r.support.same_members(sig.support()));
        const auto o = sparsest_solution(dict, f, k);
        REQUIRE(o.signal);
        CHECK((r.estimate - o.signal->dense()).norm() <= 1e-8 * sig.dense().norm());
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
  SECTION("residual tolerance stops early") {
    const auto dict = fixtures::identity(5);
    Vector f(5);
    f << 1, 0.01, 0, 0, 0;
    const auto r = omp(dict, f, 3, 0.1);
    CHECK(r.iterations == 1);
    CHECK(r.stop_reason == StopReason::ResidualBelowThreshold);
  }
  REQUIRE_THROWS_KIND(omp(fixtures::identity(3), Vector::Ones(3), 4), ErrorKind::KOutOfRange);
}

TEST_CASE("recover_sparse passes through", "[solvers]") {
  const auto dict = instances::near_orthonormal(10, 0.05, 4);
  Rng rng(2);
  const auto m = make_measurement(dict, generate_sparse_signal(10, 2, UniformSymmetric{}, rng), 0.0, rng);
  SolverOptions o;
  o.rng_seed = 99;
  const auto a = recover_sparse(dict, m, OmptStrategy{0.3}, o);
  const auto b = ompt::ompt(dict, m.observed, 0.3, o);
  CHECK(a.support.indices() == b.support.indices());
  CHECK(a.estimate == b.estimate);
  CHECK(a.inner_product_count == b.inner_product_count);
  CHECK(a.method == Method::Ompt);

  const auto c = recover_sparse(dict, m, OmpStrategy{});
  const auto e = omp(dict, m.observed, 2);
  CHECK(c.support.indices() == e.support.indices());
  CHECK(c.estimate == e.estimate);
  CHECK(c.method == Method::Omp);
}

TEST_CASE("solver invariants on random instances", "[solvers][property]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 8 + rng.uniform_index(25);
    const std::size_t d = n + rng.uniform_index(2 * n);
    const auto dict = gaussian_dictionary(n, d, rng);
    Vector f(static_cast<Index>(n));
    for (Index i = 0; i < f.size(); ++i) f[i] = rng.normal();
    const double t = rng.uniform(0.05, 0.95);
    SolverOptions o;
    o.rng_seed = seed;
    const auto r = ompt::ompt(dict, f, t, o);
    check_result_shape(r, dict);
    const double fn = f.norm();
    const double decay = std::sqrt(1.0 - t * t);
    for (std::size_t s = 1; s < r.residual_norms.size(); ++s) {
      CHECK(r.residual_norms[s] <= decay * r.residual_norms[s - 1] + 1e-10);
      CHECK(r.residual_norms[s] <= std::pow(decay, static_cast<double>(s)) * fn + 1e-8);
    }
    if (r.stop_reason == StopReason::ResidualBelowThreshold) {
      CHECK(r.residual_norms.back() <= t * fn);
      CHECK(r.iterations <= iteration_bound(t));
    }
    if (r.stop_reason == StopReason::NoIndexMeetsThreshold) {
      const Vector res = f - dict.matrix() * r.estimate;
      CHECK((dict.matrix().transpose() * res).cwiseAbs().maxCoeff() < t * r.residual_norms.back() * (1.0 + 1e-9));
    }
    // Residual orthogonal to everything selected.
    const Vector res = f - dict.matrix() * r.estimate;
    for (auto i : r.support.indices()) CHECK(std::abs(res.dot(dict.atom(static_cast<Index>(i)))) <= 1e-10 * fn);

    const auto again = ompt::ompt(dict, f, t, o);
    CHECK(again.support.indices() == r.support.indices());
    CHECK(again.estimate == r.estimate);
    CHECK(again.residual_norms == r.residual_norms);
    CHECK(again.inner_product_count == r.inner_product_count);

    const std::size_t k = 1 + rng.uniform_index(std::min<std::size_t>(n, 6));
    const auto g = omp(dict, f, k);
    check_result_shape(g, dict);
    if (g.iterations == k) {
      CHECK(g.inner_product_count == k * (2 * d - k + 1) / 2);
    }
  }
}

TEST_CASE("exact recovery under the noiseless guarantee", "[solvers][property]") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto dict = instances::near_orthonormal(10, 0.04 + 0.001 * static_cast<double>(seed), 70 + seed);
    const auto rep = coherence_report(dict, 3, true, false);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto iv = noiseless_interval(rep.nu(k), rep.delta(k), k);
      if (!iv.feasible) continue;
      for (int s = 0; s < 5; ++s) {
        Rng rng(derive_seed(seed, {k, static_cast<std::uint64_t>(s)}));
        const auto sig = generate_sparse_signal(10, k, UniformSymmetric{}, rng);
        const Vector f = dict.matrix() * sig.dense();
        const double t = iv.lower + rng.uniform(0.01, 1.0) * (iv.upper - iv.lower);
        const auto r = ompt::ompt(dict, f, t, k_iterations(k, seed));
        CHECK(r.iterations == k);
        CHECK(r.support.same_members(sig.support()));
        CHECK((r.estimate - sig.dense()).norm() <= 1e-8 * sig.dense().norm());
        const auto g = omp(dict, f, k);
        CHECK(g.support.same_members(r.support));
        ++checked;
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("noisy recovery under the noisy guarantee", "[solvers][property]") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto dict = instances::near_orthonormal(10, 0.04, 170 + seed);
    const auto rep = coherence_report(dict, 2, true, false);
    for (std::size_t k = 1; k <= 2; ++k) {
      Rng rng(derive_seed(seed, {k}));
      const auto sig = generate_sparse_signal(10, k, UniformSymmetric{0.5, 1.0}, rng);
      const double eps = 0.9 * max_noise_level(rep.nu(k), rep.delta(k), k, sig.a_min());
      if (eps <= 0.0) continue;
      const auto iv = noisy_interval(rep.nu(k), rep.delta(k), k, sig.a_min(), eps);
      REQUIRE(iv.feasible);
      const auto m = make_measurement(dict, sig, eps, rng);
      CHECK(std::abs((m.observed - dict.matrix() * sig.dense()).norm() - eps) <= 1e-12);
      SolverOptions o;
      o.max_iterations = k;
      o.residual_tolerance = 0.0;
      const auto r = ompt::ompt(dict, m.observed, iv.midpoint(), o);
      CHECK(r.support.same_members(sig.support()));
      CHECK((r.estimate - sig.dense()).squaredNorm() <= error_bound(rep.delta(k), eps) + 1e-10);
      ++checked;
    }
  }
  CHECK(checked > 40);
}
