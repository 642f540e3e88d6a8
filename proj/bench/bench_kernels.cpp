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

// Serial vs OpenMP timings for the hot kernels and the two heavy drivers.
//
//   bench_kernels [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <omp.h>

#include "kingcode/code_builder.hpp"
#include "kingcode/kernels.hpp"
#include "kingcode/protocol.hpp"

using namespace kingcode;

namespace {

std::vector<Complex> gaussian_entries(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto &x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

double best_of(int repeats, const std::function<void()> &fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char *name, int repeats, const std::function<void(Exec)> &fn) {
    const double s = best_of(repeats, [&] { fn(Exec::serial); });
    const double p = best_of(repeats, [&] { fn(Exec::parallel); });
    std::printf("%-34s serial %9.4f ms  parallel %9.4f ms  speedup %5.2fx\n", name, s * 1e3, p * 1e3,
                s / p);
}

} // namespace

int main(int argc, char **argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    std::printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);
    std::mt19937_64 rng(1);

    {
        const std::size_t n = 256;
        const auto a = gaussian_entries(n * n, rng);
        const auto b = gaussian_entries(n * n, rng);
        std::vector<Complex> c(n * n);
        report("matmul 256x256x256", repeats,
               [&](Exec e) { kernels::matmul(e, a, b, c, n, n, n); });
    }
    {
        const std::size_t count = 256;
        const std::size_t dim = 1024;
        std::vector<std::vector<Complex>> store;
        std::vector<std::span<const Complex>> views;
        for (std::size_t i = 0; i < count; ++i) {
            store.push_back(gaussian_entries(dim, rng));
        }
        for (const auto &s : store) {
            views.emplace_back(s);
        }
        report("cross_gram 256 vectors, dim 1024", repeats,
               [&](Exec e) { (void)kernels::cross_gram(e, views, views); });
    }

    const SchmidtState bell = SchmidtState::maximally_entangled(2);
    report("greedy GHZ selection n=6", repeats, [&](Exec e) {
        (void)select_orthogonal_set(bell.eta(), bell.basis_k(), 6, 1, qubit_example_errors(),
                                    SelectionMode::greedy, {}, e);
    });

    const auto mc = build_multipartite_code(bell.eta(), bell.basis_k(), 6, 1, qubit_example_errors(),
                                            SelectionMode::greedy);
    const GameConfig cfg{mc.code, qubit_king_measurements(), qubit_example_errors(),
                         qubit_example_index_sets(), 1, 7, 10};
    report("exhaustive game, GHZ n=6", repeats, [&](Exec e) { (void)run_exhaustive(cfg, {}, e); });
    report("Monte Carlo 20000 trials, GHZ n=6", repeats,
           [&](Exec e) { (void)run_montecarlo(cfg, 20000, {}, e); });
    return 0;
}
