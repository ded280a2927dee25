// Copyright 2026 The cnnscale Authors
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

#ifndef CNNSCALE_SRC_WINDOW_H_
#define CNNSCALE_SRC_WINDOW_H_

#include <cstdint>
#include <utility>

#include "cnnscale/rational.h"

namespace cnnscale::internal {

// Integers v with |center - v| < half_width, as an inclusive [lo, hi] pair.
// lo > hi when there are none.
inline std::pair<std::int64_t, std::int64_t> OpenInterval(
    const Rational& center, const Rational& half_width) {
  const std::int64_t lo = ToInt64(Floor(center - half_width)) + 1;
  const std::int64_t hi = ToInt64(Ceil(center + half_width)) - 1;
  return {lo, hi};
}

}  // namespace cnnscale::internal

#endif  // CNNSCALE_SRC_WINDOW_H_
