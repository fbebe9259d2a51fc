// Copyright (c) 2026 The spkpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fmt/format.h"
#include "spkpriv/attack.h"
#include "spkpriv/error.h"

namespace spkpriv {

namespace {

struct Vertex {
  std::int64_t rejected_targets;     // j: targets below the threshold
  std::int64_t accepted_nontargets;  // k: nontargets at or above it
  double threshold;
};

}  // namespace

EerResult ComputeEer(const ScoreSet& scores) {
  if (scores.targets.empty() || scores.nontargets.empty()) {
    throw PreconditionError(fmt::format(
        "EER needs target and nontarget scores (got {} and {})",
        scores.targets.size(), scores.nontargets.size()));
  }
  std::vector<double> targets = scores.targets;
  std::vector<double> nontargets = scores.nontargets;
  const auto bad = [](double v) { return !std::isfinite(v); };
  if (std::any_of(targets.begin(), targets.end(), bad) ||
      std::any_of(nontargets.begin(), nontargets.end(), bad)) {
    throw PreconditionError("EER of non-finite scores");
  }
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  const auto n_t = static_cast<std::int64_t>(targets.size());
  const auto n_n = static_cast<std::int64_t>(nontargets.size());
  // (FAR - FRR) * n_t * n_n, exact.
  const auto gap = [&](const Vertex& v) {
    return v.accepted_nontargets * n_t - v.rejected_targets * n_n;
  };
  const auto average = [&](const Vertex& v) {
    const double far = static_cast<double>(v.accepted_nontargets) / static_cast<double>(n_n);
    const double frr = static_cast<double>(v.rejected_targets) / static_cast<double>(n_t);
    return 0.5 * (far + frr);
  };

  // Walk distinct score values upwards. `previous` is the vertex before the
  // current group, `current` the one after it.
  Vertex previous{0, n_n, std::min(targets.front(), nontargets.front())};
  std::size_t ti = 0, ni = 0;
  while (gap(previous) > 0) {
    const double value = std::min(ti < targets.size() ? targets[ti] : INFINITY,
                                  ni < nontargets.size() ? nontargets[ni] : INFINITY);
    Vertex current = previous;
    while (ti < targets.size() && targets[ti] == value) {
      ++current.rejected_targets;
      ++ti;
    }
    while (ni < nontargets.size() && nontargets[ni] == value) {
      --current.accepted_nontargets;
      ++ni;
    }
    const double next = std::min(ti < targets.size() ? targets[ti] : INFINITY,
                                 ni < nontargets.size() ? nontargets[ni] : INFINITY);
    current.threshold = std::isinf(next)
                            ? std::nextafter(value, std::numeric_limits<double>::infinity())
                            : value + 0.5 * (next - value);

    const std::int64_t before = gap(previous);
    const std::int64_t after = gap(current);
    if (after <= 0) {
      EerResult result{0.0, 0.0, targets.size(), nontargets.size()};
      if (after == 0 || -after < before) {
        result.eer = average(current);
        result.threshold = current.threshold;
      } else if (before < -after) {
        result.eer = average(previous);
        result.threshold = previous.threshold;
      } else {
        result.eer = 0.5 * (average(previous) + average(current));
        result.threshold = value;
      }
      return result;
    }
    previous = current;
  }
  // Unreachable: the gap starts at n_t * n_n and ends at -n_t * n_n.
  throw PreconditionError("EER sweep did not cross the diagonal");
}

}  // namespace spkpriv
