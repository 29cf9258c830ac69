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

#include "ompt/error.hpp"
#include "ompt/linalg.hpp"
#include "ompt/matrix_io.hpp"
#include "ompt/metrics.hpp"
#include "ompt/thresholds.hpp"
#include "ompt/solvers.hpp"
#include "ompt/oracle.hpp"
#include "ompt/experiments.hpp"
#include "ompt/serialize.hpp"
#include "ompt/report_io.hpp"
