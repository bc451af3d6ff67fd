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

#include "qcl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qcl/rng.hpp"

namespace qcl {

HermitianEigen descending_eigen(const CMatrix& hermitian) {
  const auto n = hermitian.rows();
  HermitianEigen out;
  const bool diagonal = (hermitian - CMatrix(hermitian.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return hermitian(a, a).real() > hermitian(b, b).real();
    });
    out.values.resize(n);
    out.vectors = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.values[i] = hermitian(order[i], order[i]).real();
      out.vectors(order[i], i) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (hermitian + hermitian.adjoint()));
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Spectrum distinct_spectrum(const RVector& descending_values, double tol) {
  Spectrum s;
  for (Eigen::Index i = 0; i < descending_values.size(); ++i) {
    const double v = descending_values[i];
    if (!s.values.empty() && std::abs(s.values.back() - v) <= tol) {
      ++s.multiplicities.back();
    } else {
      s.values.push_back(v);
      s.multiplicities.push_back(1);
    }
  }
  return s;
}

CMatrix random_unitary(int n, CounterRng& rng) {
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace qcl
