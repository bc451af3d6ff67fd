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

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qcl/core.hpp"

namespace qcl::csv {

// Shortest round-trip decimal representation.
std::string format(double v);

class Writer {
 public:
  // Throws Error when the file cannot be opened.
  explicit Writer(const std::string& path);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void row(const RVector& values);
  // Leading integer columns followed by reals.
  void row(const std::vector<long long>& ints, const std::vector<double>& values);
  // Pre-formatted cells, written verbatim.
  void text_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::string path_;
};

std::vector<std::vector<double>> read_numeric(const std::string& path, bool skip_header);

}  // namespace qcl::csv
