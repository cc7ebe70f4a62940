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

#ifndef COLQA_HUNGARIAN_HPP_
#define COLQA_HUNGARIAN_HPP_

#include <cstddef>
#include <vector>

namespace colqa {

// Dense row-major score matrix.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ScoreMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct AssignedPair {
  std::size_t row;  // ground-truth index when used by ANLSL
  std::size_t col;  // prediction index
  double score;
};

struct Assignment {
  std::vector<AssignedPair> pairs;  // sorted by row
  double total() const;
};

// Maximum-total-score assignment of size min(rows, cols) (Kuhn-Munkres with
// potentials, O(n^2 m)). Throws std::invalid_argument on an empty matrix or
// non-finite entries.
Assignment hungarian_match(const ScoreMatrix& scores);

}  // namespace colqa

#endif  // COLQA_HUNGARIAN_HPP_
