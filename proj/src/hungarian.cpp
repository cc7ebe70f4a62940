/*
 * Copyright 2026 The colqa Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "colqa/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace colqa {

ScoreMatrix::ScoreMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw std::invalid_argument("ScoreMatrix: ragged initializer");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

double Assignment::total() const {
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.score;
  return sum;
}

Assignment hungarian_match(const ScoreMatrix& scores) {
  if (scores.empty()) {
    throw std::invalid_argument("hungarian_match: empty score matrix");
  }
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    for (std::size_t c = 0; c < scores.cols(); ++c) {
      if (!std::isfinite(scores(r, c))) {
        throw std::invalid_argument("hungarian_match: non-finite score");
      }
    }
  }

  // The solver below needs n <= m; work on the transpose otherwise.
  const bool transposed = scores.rows() > scores.cols();
  const std::size_t n = transposed ? scores.cols() : scores.rows();
  const std::size_t m = transposed ? scores.rows() : scores.cols();
  auto cost = [&](std::size_t i, std::size_t j) {
    // Maximizing score == minimizing its negation.
    return transposed ? -scores(j, i) : -scores(i, j);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual source.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  result.pairs.reserve(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    const std::size_t i = match[j] - 1;
    const std::size_t col = j - 1;
    if (transposed) {
      result.pairs.push_back({col, i, scores(col, i)});
    } else {
      result.pairs.push_back({i, col, scores(i, col)});
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const AssignedPair& a, const AssignedPair& b) {
              return a.row < b.row;
            });
  return result;
}

}  // namespace colqa
