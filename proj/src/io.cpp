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

#include "wentzell/io.hpp"

#include "wentzell/error.hpp"

#include <charconv>
#include <cstdio>

namespace wentzell {

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path &path, std::vector<std::string> header)
    : path_(path), os_(path, std::ios::binary), columns_(header.size()) {
  if (!os_)
    throw InvalidInput("cannot open " + path.string() + " for writing");
  for (const auto &h : header)
    add(std::string_view(h));
  end_row();
}

void CsvWriter::separator() {
  if (filled_ == columns_)
    throw InvalidInput("csv row has more fields than the header in " + path_.string());
  if (filled_++)
    os_ << ',';
}

CsvWriter &CsvWriter::add(double x) {
  separator();
  os_ << format_double(x);
  return *this;
}

CsvWriter &CsvWriter::add(long long x) {
  separator();
  os_ << x;
  return *this;
}

CsvWriter &CsvWriter::add(std::string_view s) {
  separator();
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    os_ << s;
    return *this;
  }
  os_ << '"';
  for (char c : s) {
    if (c == '"')
      os_ << '"';
    os_ << c;
  }
  os_ << '"';
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_)
    throw InvalidInput("csv row has fewer fields than the header in " + path_.string());
  os_ << '\n';
  filled_ = 0;
}

void write_coo(const std::filesystem::path &path, const Matrix &A) {
  CsvWriter w(path, {"row", "col", "value"});
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0.0) {
        w.add(static_cast<long long>(i)).add(static_cast<long long>(j)).add(A(i, j));
        w.end_row();
      }
}

void write_nodal(const std::filesystem::path &path, const std::vector<Vec2> &vertices,
                 const Vector &u) {
  CsvWriter w(path, {"node", "x", "y", "value"});
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    w.add(static_cast<long long>(i)).add(vertices[i].x).add(vertices[i].y).add(u[static_cast<Eigen::Index>(i)]);
    w.end_row();
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace wentzell
