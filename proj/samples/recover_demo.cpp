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

// Plants a sparse signal in the identity+Fourier dictionary, then recovers it
// with OMPT and OMP and prints what each one cost.

#include <cmath>
#include <cstdio>

#include "ompt/ompt.hpp"

int main() {
  const std::size_t n = 64;
  const std::size_t k = 4;
  const auto dict = ompt::build_identity_fourier_dictionary(n);
  ompt::Rng rng(7);
  const auto signal = ompt::generate_sparse_signal(2 * n, k, ompt::UniformSymmetric{0.5, 1.0}, rng);
  const auto m = ompt::make_measurement(dict, signal, 0.0, rng);

  const auto report = ompt::coherence_report(dict, k, false, false);
  std::printf("M = %.4f  nu_%zu = %.4f  mu_1,%zu = %.4f\n", report.mutual, k, report.nu(k), k, report.mu(k));

  ompt::SolverOptions opts;
  opts.max_iterations = k;
  opts.residual_tolerance = 1e-12;
  const double t = std::sqrt(report.mutual);
  const auto a = ompt::ompt(dict, m.observed, t, opts);
  const auto b = ompt::omp(dict, m.observed, k);

  const double err_a = (a.estimate - signal.dense()).norm();
  const double err_b = (b.estimate - signal.dense()).norm();
  std::printf("OMPT t=%.3f: %zu iterations, %llu inner products, error %.2e\n", t, a.iterations,
              static_cast<unsigned long long>(a.inner_product_count), err_a);
  std::printf("OMP:         %zu iterations, %llu inner products, error %.2e\n", b.iterations,
              static_cast<unsigned long long>(b.inner_product_count), err_b);
  return 0;
}
