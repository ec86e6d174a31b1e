/*
 * Copyright 2026 The lrhte Authors.
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

#ifndef LRHTE_NUMERICS_SVD_H_
#define LRHTE_NUMERICS_SVD_H_

#include <cstddef>
#include <vector>

#include "lrhte/numerics/matrix.h"

namespace lrhte::numerics {

// Top-k singular values in descending order, computed with one-sided
// (Hestenes) Jacobi rotations on the min(rows, cols) columns of m or mᵀ.
// Requires k <= min(rows, cols); otherwise throws kOutOfRange.
std::vector<double> SingularValues(const Matrix& m, std::size_t k);

}  // namespace lrhte::numerics

#endif  // LRHTE_NUMERICS_SVD_H_
