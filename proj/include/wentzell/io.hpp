// Copyright 2026 The wentzell authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include "wentzell/types.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace wentzell {

/// Shortest round-trip decimal form, '.' separator, independent of the locale.
std::string format_double(double x);

/// CSV file with a one-line header. Fields containing ',' or '"' are quoted.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path &path, std::vector<std::string> header);

  CsvWriter &add(double x);
  CsvWriter &add(long long x);
  CsvWriter &add(std::string_view s);
  CsvWriter &add(bool b) { return add(std::string_view(b ? "true" : "false")); }
  void end_row();

  const std::filesystem::path &path() const { return path_; }

private:
  void separator();

  std::filesystem::path path_;
  std::ofstream os_;
  std::size_t columns_ = 0;
  std::size_t filled_ = 0;
};

/// Dense matrix as COO triplets (row, col, value), skipping exact zeros.
void write_coo(const std::filesystem::path &path, const Matrix &A);

/// Nodal field as (node, x, y, value) given vertex coordinates.
void write_nodal(const std::filesystem::path &path, const std::vector<Vec2> &vertices,
                 const Vector &u);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t h);

} // namespace wentzell
