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

#include <atomic>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "qcl/csv.hpp"
#include "qcl/linalg.hpp"
#include "qcl/parallel.hpp"
#include "qcl/rng.hpp"

using namespace qcl;

TEST_SUITE("support") {

TEST_CASE("counter generator") {
  CounterRng a(7), b(7);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.counter() == 10);
  auto s1 = CounterRng::substream(1, 2, "x");
  auto s2 = CounterRng::substream(1, 2, "y");
  auto s3 = CounterRng::substream(1, 3, "x");
  CHECK(s1.key() != s2.key());
  CHECK(s1.key() != s3.key());
  CHECK(CounterRng::derive(5, 6, "p") == CounterRng::derive(5, 6, "p"));

  CounterRng r(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("random unitaries") {
  auto rng = CounterRng::substream(0, 0, "u");
  for (int n : {1, 3, 8}) {
    const CMatrix u = random_unitary(n, rng);
    CHECK((u.adjoint() * u - CMatrix::Identity(n, n)).norm() < 1e-13);
  }
}

TEST_CASE("distinct spectrum") {
  RVector v(5);
  v << 3.0, 3.0, 1.0, 0.0, 0.0;
  const Spectrum s = distinct_spectrum(v);
  CHECK(s.values == std::vector<double>{3.0, 1.0, 0.0});
  CHECK(s.multiplicities == std::vector<int>{2, 1, 2});
}

TEST_CASE("csv round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "qcl_unit.csv").string();
  {
    csv::Writer w(path);
    w.header({"i", "x", "y"});
    w.row({static_cast<long long>(3)}, {0.1, -2.5e-17});
    w.row(std::vector<double>{1.0, 1.0 / 3.0, 1e300});
  }
  const auto rows = csv::read_numeric(path, true);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == 3.0);
  CHECK(rows[0][1] == 0.1);
  CHECK(rows[0][2] == -2.5e-17);
  CHECK(rows[1][1] == 1.0 / 3.0);
  CHECK(csv::format(0.1) == "0.1");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(csv::Writer("/nonexistent/dir/x.csv"), Error);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_WITH(parallel_for(50, 3,
                                 [](std::size_t i) {
                                   if (i == 7 || i == 30) throw std::runtime_error("at " + std::to_string(i));
                                 }),
                    "at 7");
}

}  // TEST_SUITE
