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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kingcode/errors.hpp"
#include "kingcode/solution_engine.hpp"
#include "oracles.hpp"

using namespace kingcode;
using Catch::Matchers::WithinAbs;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

std::vector<StateVector> computational(std::size_t d) {
    std::vector<StateVector> out;
    for (std::size_t i = 0; i < d; ++i) {
        out.push_back(StateVector::basis(d, i));
    }
    return out;
}

std::vector<StateVector> product_basis(std::size_t d) {
    std::vector<StateVector> out;
    for (std::size_t i = 0; i < d * d; ++i) {
        out.push_back(StateVector::basis(std::vector<std::size_t>{d, d}, i));
    }
    return out;
}

/// min over unit-modulus phases of max |a - e^{i theta} b|
double phase_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        overlap += std::conj(b.data()[i]) * a.data()[i];
    }
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1.0};
    return oracle::max_abs_diff(a, phase * b);
}

SolutionPair random_pair(std::mt19937_64 &rng, std::size_t d, double floor) {
    const auto eta = oracle::random_eta(d, floor, rng);
    SchmidtState s(eta, oracle::random_basis(d, rng), oracle::random_basis(d, rng));
    return SolutionPair(std::move(s), oracle::random_basis(d * d, rng, {d, d}));
}

} // namespace

TEST_CASE("SolutionPair validation", "[solution_engine]") {
    const SchmidtState bell = SchmidtState::maximally_entangled(2);
    CHECK_NOTHROW(SolutionPair(bell, product_basis(2)));
    auto short_basis = product_basis(2);
    short_basis.pop_back();
    CHECK_THROWS_AS(SolutionPair(bell, short_basis), InvalidInput);
    auto skew = product_basis(2);
    skew[1] = skew[0];
    CHECK_THROWS_AS(SolutionPair(bell, skew), InvalidInput);
    const auto c3 = computational(3);
    const SchmidtState wide({kS, kS}, {c3[0], c3[1]}, computational(2));
    CHECK_THROWS_AS(SolutionPair(wide, product_basis(2)), InvalidInput);
}

TEST_CASE("round trip recovers the qubit error operators", "[solution_engine]") {
    const SolutionPair sol = qubit_example_solution();
    const ErrorModel derived = derive_error_operators(sol);
    const auto ref = oracle::qubit_errors();
    REQUIRE(derived.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(phase_distance(derived.kraus[k], ref[k]) <= 1e-9);
    }

    // PVM vectors built here, independently of qubit_example_solution.
    const StateVector psi(std::vector<Complex>{kS, 0.0, 0.0, kS}, {2, 2});
    std::vector<StateVector> pvm;
    for (const auto &l : ref) {
        const auto v = oracle::matvec(oracle::kron(ComplexMatrix::identity(2), l), oracle::amps(psi));
        std::vector<Complex> scaled(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            scaled[i] = 2.0 * v[i];
        }
        pvm.emplace_back(scaled, std::vector<std::size_t>{2, 2});
    }
    const ErrorModel again =
        derive_error_operators(SolutionPair(SchmidtState::maximally_entangled(2), pvm));
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(phase_distance(again.kraus[k], ref[k]) <= 1e-9);
    }
}

TEST_CASE("product basis with uniform eta gives a complete operation", "[solution_engine]") {
    const SolutionPair sol(SchmidtState::maximally_entangled(2), product_basis(2));
    const ErrorModel e = derive_error_operators(sol);
    CHECK(distance(e.completeness(), ComplexMatrix::identity(2)) <= 1e-12);
}

TEST_CASE("derived operators map Psi onto the scaled PVM vectors", "[solution_engine]") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
        const SolutionPair sol = random_pair(rng, d, 0.1);
        const ErrorModel e = derive_error_operators(sol);
        const double c = std::sqrt(sol.state().min_eta_squared() / static_cast<double>(d));
        const auto psi = oracle::amps(sol.state().assemble());
        for (std::size_t k = 0; k < e.size(); ++k) {
            const auto v = oracle::matvec(oracle::kron(ComplexMatrix::identity(d), e.kraus[k]), psi);
            for (std::size_t i = 0; i < v.size(); ++i) {
                CHECK(std::abs(v[i] - c * sol.pvm_basis()[k][i]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("tiny Schmidt coefficient is rejected", "[solution_engine]") {
    const double small = 1e-12;
    const SchmidtState s({std::sqrt(1.0 - small * small), small}, computational(2), computational(2));
    CHECK_THROWS_AS(derive_error_operators(SolutionPair(s, product_basis(2))), InvalidInput);
}

TEST_CASE("gram_check examples", "[solution_engine]") {
    const SchmidtState bell = SchmidtState::maximally_entangled(2);
    const GramReport g = gram_check(bell, qubit_example_errors());
    CHECK(oracle::max_abs_diff(g.gram, 0.25 * ComplexMatrix::identity(4)) <= 1e-12);
    CHECK_THAT(g.alpha, WithinAbs(0.5, 1e-12));
    CHECK(g.pass);

    std::mt19937_64 rng(67);
    const SchmidtState any(oracle::random_eta(3, 0.1, rng), oracle::random_basis(3, rng),
                           oracle::random_basis(3, rng));
    const GramReport one = gram_check(any, ErrorModel{{ComplexMatrix::identity(3)}});
    REQUIRE(one.gram.rows() == 1);
    CHECK(std::abs(one.gram(0, 0) - Complex{1.0}) <= 1e-12);

    const ErrorModel pair{{ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}}};
    const GramReport two = gram_check(bell, pair);
    CHECK(std::abs(two.gram(0, 1)) <= 1e-15);
    CHECK(std::abs(two.gram(0, 0) - Complex{0.5}) <= 1e-15);
    CHECK(std::abs(two.gram(1, 1) - Complex{0.5}) <= 1e-15);
    CHECK(two.pass);

    const ErrorModel lopsided{{ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 0.0}, {0.0, 0.5}}}};
    CHECK_FALSE(gram_check(bell, lopsided).pass);
    CHECK_THROWS_AS(gram_check(bell, ErrorModel{{ComplexMatrix::identity(3)}}), InvalidInput);
}

TEST_CASE("gram oracle: explicit inner products", "[solution_engine]") {
    std::mt19937_64 rng(71);
    const SolutionPair sol = random_pair(rng, 3, 0.1);
    const ErrorModel e = derive_error_operators(sol);
    const GramReport g = gram_check(sol.state(), e);
    const auto psi = oracle::amps(sol.state().assemble());
    std::vector<std::vector<Complex>> imgs;
    for (const auto &l : e.kraus) {
        imgs.push_back(oracle::matvec(oracle::kron(ComplexMatrix::identity(3), l), psi));
    }
    for (std::size_t a = 0; a < imgs.size(); ++a) {
        for (std::size_t b = 0; b < imgs.size(); ++b) {
            CHECK(std::abs(g.gram(a, b) - oracle::dot(imgs[a], imgs[b])) <= 1e-13);
        }
    }
}

TEST_CASE("derive_index_sets reproduces the qubit table", "[solution_engine]") {
    const auto d = derive_index_sets(SchmidtState::maximally_entangled(2), qubit_example_errors(),
                                     qubit_king_measurements());
    CHECK(d.sets.sets() == qubit_example_index_sets().sets());
    for (const auto &[key, f] : d.sets.coeffs()) {
        CHECK(std::abs(f - Complex{1.0}) <= 1e-9);
    }
    for (const auto &[key, r] : d.residuals) {
        CHECK(r <= 1e-12);
    }
}

TEST_CASE("trivial single-outcome family owns every index", "[solution_engine]") {
    const MeasurementFamily trivial{1, {ComplexMatrix::identity(2)}};
    const auto d = derive_index_sets(SchmidtState::maximally_entangled(2), qubit_example_errors(),
                                     {trivial});
    CHECK(d.sets.at(1, 1) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("perturbed family is not decomposable", "[solution_engine]") {
    auto fams = qubit_king_measurements();
    fams[0].ops[0](0, 1) += 0.1; // no longer a valid family: skip validate on purpose
    try {
        derive_index_sets(SchmidtState::maximally_entangled(2), qubit_example_errors(), fams);
        FAIL("expected a decomposition failure");
    } catch (const DecompositionError &e) {
        CHECK(e.family() == 1);
        CHECK(e.outcome() == 1);
        CHECK(e.residual() > 1e-3);
    }
}

TEST_CASE("derive_index_sets refuses a model failing the Gram condition", "[solution_engine]") {
    const ErrorModel lopsided{{ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 0.0}, {0.0, 0.5}}}};
    CHECK_THROWS_AS(derive_index_sets(SchmidtState::maximally_entangled(2), lopsided,
                                      qubit_king_measurements()),
                    VerificationFailure);
}

TEST_CASE("verify_solution examples", "[solution_engine]") {
    const auto fams = qubit_king_measurements();
    const SolutionVerdict good = verify_solution(qubit_example_solution(), fams);
    CHECK(good.is_solution);
    CHECK_THAT(good.min_success_probability, WithinAbs(1.0, 1e-12));
    CHECK(good.conflicts.empty());
    CHECK(good.guess_map.at({1, 3}) == 1);
    CHECK(good.guess_map.at({3, 3}) == 2);
    CHECK(good.king_probability_residual <= 1e-12);
    CHECK(good.alice_probability_residual <= 1e-12);

    const SolutionVerdict bad =
        verify_solution(SolutionPair(SchmidtState::maximally_entangled(2), product_basis(2)), fams);
    CHECK_FALSE(bad.is_solution);
    CHECK_FALSE(bad.conflicts.empty());
    CHECK(bad.min_success_probability < 1.0);
}

TEST_CASE("verify_solution serial and parallel agree", "[solution_engine]") {
    const auto fams = qubit_king_measurements();
    const SolutionPair sol(SchmidtState::maximally_entangled(2), product_basis(2));
    const SolutionVerdict s = verify_solution(sol, fams, {}, Exec::serial);
    const SolutionVerdict p = verify_solution(sol, fams, {}, Exec::parallel);
    CHECK(s.is_solution == p.is_solution);
    CHECK(s.guess_map == p.guess_map);
    CHECK(s.conflicts == p.conflicts);
    CHECK(s.min_success_probability == p.min_success_probability);
}

TEST_CASE("nonuniform eta with a product basis fails decomposition", "[solution_engine]") {
    const SchmidtState s({0.9, std::sqrt(0.19)}, computational(2), computational(2));
    const SolutionPair sol(s, product_basis(2));
    const ErrorModel e = derive_error_operators(sol);
    CHECK_THROWS_AS(derive_index_sets(s, e, qubit_king_measurements()), DecompositionError);
    CHECK_FALSE(verify_solution(sol, qubit_king_measurements()).is_solution);
}

TEST_CASE("derived models satisfy the Gram condition and are trace non-increasing",
          "[solution_engine][property]") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t % 3);
        const SolutionPair sol = random_pair(rng, d, 0.1);
        const ErrorModel e = derive_error_operators(sol);
        const GramReport g = gram_check(sol.state(), e);
        const double alpha = sol.state().min_eta_squared();
        CHECK(g.pass);
        CHECK(g.max_offdiag <= 1e-9);
        for (std::size_t k = 0; k < e.size(); ++k) {
            CHECK(std::abs(g.gram(k, k) - Complex{alpha / static_cast<double>(d)}) <= 1e-9);
        }
        CHECK(psd_defect(ComplexMatrix::identity(d) - e.completeness()) <= 1e-9);
    }
}

TEST_CASE("successful decompositions reconstruct the family exactly",
          "[solution_engine][property]") {
    // Locally rotated copies of the qubit solution are still solutions.
    std::mt19937_64 rng(79);
    const SolutionPair base = qubit_example_solution();
    for (int t = 0; t < 20; ++t) {
        const auto u = oracle::random_basis(2, rng);
        ComplexMatrix um(2, 2);
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t r = 0; r < 2; ++r) {
                um(r, c) = u[c][r];
            }
        }
        const ComplexMatrix ua = oracle::kron(um, ComplexMatrix::identity(2));
        std::vector<StateVector> basis_a;
        for (const auto &v : base.state().basis_a()) {
            basis_a.emplace_back(oracle::matvec(um, oracle::amps(v)));
        }
        std::vector<StateVector> pvm;
        for (const auto &p : base.pvm_basis()) {
            pvm.emplace_back(oracle::matvec(ua, oracle::amps(p)), std::vector<std::size_t>{2, 2});
        }
        const SchmidtState s(base.state().eta(), basis_a, base.state().basis_k());
        const SolutionPair sol(s, pvm);
        const ErrorModel e = derive_error_operators(sol);
        const auto fams = qubit_king_measurements();
        const auto d = derive_index_sets(s, e, fams);
        for (const auto &f : fams) {
            for (std::size_t i = 0; i < f.ops.size(); ++i) {
                const int out = static_cast<int>(i + 1);
                ComplexMatrix sum(2, 2);
                for (int k : d.sets.at(f.label, out)) {
                    sum += d.sets.coeff(f.label, out, k) * e.kraus[static_cast<std::size_t>(k - 1)];
                }
                CHECK(distance(sum, f.ops[i]) <= 1e-9);
            }
        }
        CHECK(verify_solution(sol, fams).is_solution);
    }
}

TEST_CASE("verify_solution agrees with derive_index_sets", "[solution_engine][property]") {
    std::mt19937_64 rng(83);
    const auto fams = qubit_king_measurements();
    std::vector<SolutionPair> pairs{qubit_example_solution(),
                                    SolutionPair(SchmidtState::maximally_entangled(2), product_basis(2))};
    for (int t = 0; t < 30; ++t) {
        pairs.push_back(random_pair(rng, 2, 0.1));
    }
    std::size_t solutions = 0;
    for (const auto &sol : pairs) {
        const bool verified = verify_solution(sol, fams).is_solution;
        bool decomposed = true;
        try {
            derive_index_sets(sol.state(), derive_error_operators(sol), fams);
        } catch (const VerificationFailure &) {
            decomposed = false;
        }
        CHECK(verified == decomposed);
        solutions += verified ? 1 : 0;
    }
    CHECK(solutions >= 1);
}
