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

#pragma once

#include <cstdint>
#include <vector>

#include <catch_amalgamated.hpp>

#include "ompt/ompt.hpp"

namespace fixtures {

inline ompt::Dictionary gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  ompt::Rng rng(seed);
  return ompt::gaussian_dictionary(n, d, rng);
}

inline ompt::Dictionary identity(std::size_t n) {
  return ompt::Dictionary::from_normalized(ompt::Matrix::Identity(static_cast<ompt::Index>(n), static_cast<ompt::Index>(n)));
}

/// Identity with atom `dup` appended a second time at the end.
inline ompt::Dictionary identity_with_duplicate(std::size_t n, std::size_t dup) {
  ompt::Matrix m = ompt::Matrix::Zero(static_cast<ompt::Index>(n), static_cast<ompt::Index>(n + 1));
  m.leftCols(static_cast<ompt::Index>(n)).setIdentity();
  m(static_cast<ompt::Index>(dup), static_cast<ompt::Index>(n)) = 1.0;
  return ompt::Dictionary::from_normalized(m);
}

}  // namespace fixtures

#define REQUIRE_THROWS_KIND(expr, expected_kind)                    \
  do {                                                              \
    bool threw_ = false;                                            \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const ompt::Error& e) {                                \
      threw_ = true;                                                \
      CHECK(e.kind() == (expected_kind));                           \
    }                                                               \
    CHECK(threw_);                                                  \
  } while (false)
