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

#ifndef COLQA_TESTS_COLLECTION_OF_HPP_
#define COLQA_TESTS_COLLECTION_OF_HPP_

#include "colqa/dataset_io.hpp"
#include "colqa/fixture.hpp"

inline colqa::Collection collection_of(const colqa::Fixture& fx) {
  colqa::Collection c;
  c.schema = fx.schema;
  c.documents = fx.documents;
  c.raw_records = fx.records;
  for (const auto& r : fx.records) c.records.push_back(colqa::normalize_record(r, fx.schema));
  return c;
}

#endif  // COLQA_TESTS_COLLECTION_OF_HPP_
