/* Copyright 2026 The qclandscape Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "qcl/csv.hpp"

#include <charconv>
#include <sstream>

namespace qcl::csv {

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Writer::Writer(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw Error("cannot open " + path + " for writing");
}

void Writer::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
  out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format(values[i]);
  out_ << '\n';
}

void Writer::row(const RVector& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format(values[i]);
  out_ << '\n';
}

void Writer::row(const std::vector<long long>& ints, const std::vector<double>& values) {
  bool first = true;
  for (long long v : ints) {
    out_ << (first ? "" : ",") << v;
    first = false;
  }
  for (double v : values) {
    out_ << (first ? "" : ",") << format(v);
    first = false;
  }
  out_ << '\n';
}

void Writer::text_row(const std::vector<std::string>& cells) { header(cells); }

std::vector<std::vector<double>> read_numeric(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc()) throw Error("non-numeric cell '" + cell + "' in " + path);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qcl::csv
