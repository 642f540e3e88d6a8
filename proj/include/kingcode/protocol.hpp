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
 * The full mean king game on a code: Alice prepares a code state, the king
 * measures the party in `king_slot` with family J, Alice runs the
 * discrimination measurement, learns J and guesses.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kingcode/code_builder.hpp"

namespace kingcode {

struct GameConfig {
    QuantumCode code;
    std::vector<MeasurementFamily> families;
    ErrorModel err;
    IndexSets index_sets;
    std::size_t king_slot = 1; ///< 1-based party handed to the king
    std::uint64_t rng_seed = 0;
    std::size_t n_random_states = 20;

    /// Throws InvalidInput on an out-of-range slot, operators that do not fit
    /// the slot, or index sets that mention errors the model does not have.
    void validate() const;
};

struct Transcript {
    std::size_t initial = 0;           ///< index into the initial-state list
    int family = 0;                    ///< J
    int king_outcome = 0;              ///< i
    double king_prob = 0.0;
    std::optional<int> alice_outcome;  ///< k, or empty for the residual outcome
    double alice_prob = 0.0;           ///< conditional on the king's outcome
    std::optional<int> guess;          ///< empty means abstain
    bool success = false;
};

/// Aggregate over all Alice outcomes of one (initial state, J, i) branch.
struct BranchSummary {
    std::size_t initial = 0;
    int family = 0;
    int king_outcome = 0;
    double king_prob = 0.0;
    double success_prob = 0.0;      ///< P(guess = i | J, i)
    double alice_total = 0.0;       ///< sum over all Alice outcomes incl. residual
    double containment = 0.0;       ///< ||Pi_{X(J,i)} post||^2
};

struct ExhaustiveReport {
    std::vector<StateVector> initial_states;
    std::vector<BranchSummary> branches;
    std::vector<Transcript> transcripts;
    std::vector<std::string> failures;
    double min_success = 1.0;
    double max_success = 0.0;
    double max_king_sum_dev = 0.0;  ///< max |sum_i p_i - 1| per (state, J)
    double max_alice_sum_dev = 0.0; ///< max |sum_k q_k - 1| per branch
};

/// Alice's guess: the unique i with k in X^(J,i), or empty (abstain).
std::optional<int> guess(int k, int family, const IndexSets &sets);

/// The code basis followed by cfg.n_random_states seeded random unit
/// superpositions (complex Gaussian coefficients).
std::vector<StateVector> initial_states(const GameConfig &cfg);

/// Every initial state, every J, every king outcome of positive probability;
/// leaks (Alice outcomes outside X^(J,i)) and residual outcomes are recorded
/// as failures. Throws VerificationFailure when the code has no diagonal
/// Knill-Laflamme structure for the embedded errors.
ExhaustiveReport run_exhaustive(const GameConfig &cfg, const Tolerance &tol = {},
                                Exec exec = Exec::parallel);

struct MonteCarloReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::optional<double> rate; ///< empty when trials == 0
    std::vector<std::size_t> family_trials;    ///< per family, in cfg order
    std::vector<std::size_t> family_successes;
};

/// Sampled games: fresh random code state, uniform J, Born-sampled king and
/// Alice outcomes. Trial t draws from its own generator derived from
/// (rng_seed, t), so serial and parallel runs agree exactly.
MonteCarloReport run_montecarlo(const GameConfig &cfg, std::size_t trials,
                                const Tolerance &tol = {}, Exec exec = Exec::parallel);

/// Generator for an independent stream derived from a seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);

} // namespace kingcode
