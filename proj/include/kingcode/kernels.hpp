// Copyright 2026 The kingcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex kernels with two execution paths: a plain serial reference
 * and an OpenMP-parallel version. Both paths accumulate every output entry in
 * the same order, so their results are bit-identical; the serial path exists
 * for testing and benchmarking.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kingcode {

using Complex = std::complex<double>;

enum class Exec { serial, parallel };

namespace kernels {

/// c (m x n) = a (m x k) * b (k x n), all row-major.
void matmul(Exec exec, std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k, std::size_t n);

/// y (m) = a (m x n) * x (n).
void matvec(Exec exec, std::span<const Complex> a, std::span<const Complex> x,
            std::span<Complex> y, std::size_t m, std::size_t n);

/// Conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

/// Row-major |lhs| x |rhs| matrix of <lhs_a | rhs_b>. All vectors must share
/// one length.
std::vector<Complex> cross_gram(Exec exec,
                                const std::vector<std::span<const Complex>> &lhs,
                                const std::vector<std::span<const Complex>> &rhs);

/// Kronecker product of a (ar x ac) and b (br x bc).
void kron(Exec exec, std::span<const Complex> a, std::size_t ar, std::size_t ac,
          std::span<const Complex> b, std::size_t br, std::size_t bc,
          std::span<Complex> out);

} // namespace kernels
} // namespace kingcode
