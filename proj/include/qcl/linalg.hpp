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

#include <vector>

#include "qcl/core.hpp"

namespace qcl {

// Hermitian eigendecomposition with eigenvalues in descending order.
// Diagonal inputs are handled exactly (stable sort of the diagonal, unit
// eigenvectors), so preset matrices keep their printed rational values.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;  // column i pairs with values[i]
};
HermitianEigen descending_eigen(const CMatrix& hermitian);

// Distinct eigenvalues (descending) and their multiplicities, grouping values
// closer than `tol`.
struct Spectrum {
  std::vector<double> values;
  std::vector<int> multiplicities;
};
Spectrum distinct_spectrum(const RVector& descending_values, double tol = 1e-9);

// Haar-distributed unitary from the QR decomposition of a complex Gaussian
// matrix, phases fixed by the diagonal of R.
class CounterRng;
CMatrix random_unitary(int n, CounterRng& rng);

}  // namespace qcl
