/*
 * Copyright (C) 2026 The expansion-grr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef GRR__DTW_HPP
#define GRR__DTW_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace grr {

struct DtwAlignment
{
  /// Sum of the matched pair costs.
  double total = 0.0;

  /// Matched (i, j) pairs from (0, 0) to (n-1, m-1).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  double mean() const { return total / static_cast<double>(pairs.size()); }
};

/// Classic dynamic time warping with unit steps (diagonal, down, right).
/// Backtracking prefers the diagonal, then the step along the first
/// sequence.
template<class Seq, class Cost>
DtwAlignment dtw_align(const Seq& a, const Seq& b, Cost cost)
{
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 || m == 0)
    throw std::invalid_argument("dtw needs nonempty sequences");

  std::vector<double> acc(n * m);
  const auto at = [&](std::size_t i, std::size_t j) -> double& {
    return acc[i * m + j];
  };

  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < m; ++j)
    {
      const double c = cost(a[i], b[j]);
      if (i == 0 && j == 0)
        at(i, j) = c;
      else if (i == 0)
        at(i, j) = c + at(i, j - 1);
      else if (j == 0)
        at(i, j) = c + at(i - 1, j);
      else
        at(i, j) = c + std::min({at(i - 1, j - 1), at(i - 1, j), at(i, j - 1)});
    }
  }

  DtwAlignment out;
  out.total = at(n - 1, m - 1);
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  out.pairs.emplace_back(i, j);
  while (i > 0 || j > 0)
  {
    if (i == 0)
      --j;
    else if (j == 0)
      --i;
    else
    {
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left)
      {
        --i;
        --j;
      }
      else if (up <= left)
        --i;
      else
        --j;
    }
    out.pairs.emplace_back(i, j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

} // namespace grr

#endif // GRR__DTW_HPP
