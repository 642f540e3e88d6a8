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

#include "kingcode/kernels.hpp"

#include <cassert>

namespace kingcode::kernels {

namespace {

// Below this many scalar multiply-adds the thread team costs more than it saves.
constexpr std::size_t kParallelThreshold = 1U << 14;

bool go_parallel(Exec exec, std::size_t work) {
    return exec == Exec::parallel && work >= kParallelThreshold;
}

inline void matmul_row(std::span<const Complex> a, std::span<const Complex> b,
                       std::span<Complex> c, std::size_t i, std::size_t k,
                       std::size_t n) {
    Complex *crow = c.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
        crow[j] = Complex{};
    }
    for (std::size_t p = 0; p < k; ++p) {
        const Complex aip = a[i * k + p];
        if (aip == Complex{}) {
            continue;
        }
        const Complex *brow = b.data() + p * n;
        for (std::size_t j = 0; j < n; ++j) {
            crow[j] += aip * brow[j];
        }
    }
}

} // namespace

void matmul(Exec exec, std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k, std::size_t n) {
    assert(a.size() == m * k && b.size() == k * n && c.size() == m * n);
    const auto rows = static_cast<std::ptrdiff_t>(m);
    if (go_parallel(exec, m * k * n)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            matmul_row(a, b, c, static_cast<std::size_t>(i), k, n);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            matmul_row(a, b, c, static_cast<std::size_t>(i), k, n);
        }
    }
}

void matvec(Exec exec, std::span<const Complex> a, std::span<const Complex> x,
            std::span<Complex> y, std::size_t m, std::size_t n) {
    assert(a.size() == m * n && x.size() == n && y.size() == m);
    const auto rows = static_cast<std::ptrdiff_t>(m);
    auto row = [&](std::ptrdiff_t i) {
        Complex acc{};
        const Complex *arow = a.data() + static_cast<std::size_t>(i) * n;
        for (std::size_t j = 0; j < n; ++j) {
            acc += arow[j] * x[j];
        }
        y[static_cast<std::size_t>(i)] = acc;
    };
    if (go_parallel(exec, m * n)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            row(i);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            row(i);
        }
    }
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    assert(a.size() == b.size());
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

std::vector<Complex> cross_gram(Exec exec,
                                const std::vector<std::span<const Complex>> &lhs,
                                const std::vector<std::span<const Complex>> &rhs) {
    const std::size_t m = lhs.size();
    const std::size_t n = rhs.size();
    std::vector<Complex> out(m * n);
    const std::size_t len = m > 0 ? lhs.front().size() : 0;
    const auto total = static_cast<std::ptrdiff_t>(m * n);
    if (go_parallel(exec, m * n * len)) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
            const auto u = static_cast<std::size_t>(idx);
            out[u] = inner(lhs[u / n], rhs[u % n]);
        }
    } else {
        for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
            const auto u = static_cast<std::size_t>(idx);
            out[u] = inner(lhs[u / n], rhs[u % n]);
        }
    }
    return out;
}

void kron(Exec exec, std::span<const Complex> a, std::size_t ar, std::size_t ac,
          std::span<const Complex> b, std::size_t br, std::size_t bc,
          std::span<Complex> out) {
    assert(a.size() == ar * ac && b.size() == br * bc &&
           out.size() == ar * ac * br * bc);
    const std::size_t out_cols = ac * bc;
    const auto out_rows = static_cast<std::ptrdiff_t>(ar * br);
    auto row = [&](std::ptrdiff_t r) {
        const auto ur = static_cast<std::size_t>(r);
        const std::size_t i = ur / br;
        const std::size_t p = ur % br;
        Complex *orow = out.data() + ur * out_cols;
        for (std::size_t j = 0; j < ac; ++j) {
            const Complex aij = a[i * ac + j];
            for (std::size_t q = 0; q < bc; ++q) {
                orow[j * bc + q] = aij * b[p * bc + q];
            }
        }
    };
    if (go_parallel(exec, out.size())) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < out_rows; ++r) {
            row(r);
        }
    } else {
        for (std::ptrdiff_t r = 0; r < out_rows; ++r) {
            row(r);
        }
    }
}

} // namespace kingcode::kernels
