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
 * From a solution pair (entangled state, Alice's projective measurement) to
 * the error operators and index sets that certify it, plus a direct
 * exhaustive check of whether a pair solves the game at all.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kingcode/model.hpp"

namespace kingcode {

/// Schmidt state on C^d (x) C^d and an orthonormal basis {|p_k>} of the
/// d^2-dimensional joint space.
class SolutionPair {
  public:
    SolutionPair(SchmidtState state, std::vector<StateVector> pvm_basis,
                 const Tolerance &tol = {});

    [[nodiscard]] const SchmidtState &state() const noexcept { return state_; }
    [[nodiscard]] const std::vector<StateVector> &pvm_basis() const noexcept { return pvm_; }

  private:
    SchmidtState state_;
    std::vector<StateVector> pvm_;
};

struct GramReport {
    ComplexMatrix gram; ///< <(I (x) L_k) Psi | (I (x) L_k') Psi>
    double alpha = 0.0; ///< d times the mean diagonal entry
    double max_offdiag = 0.0;
    double diag_spread = 0.0; ///< max minus min of the real diagonal
    bool pass = false;
};

/// Error operators L_k with (I (x) L_k)|Psi> = sqrt(alpha/d) |p_k> where
/// alpha = min_j eta_j^2. Throws InvalidInput if some eta_j <= eps_eq and
/// VerificationFailure if the result is not trace non-increasing.
ErrorModel derive_error_operators(const SolutionPair &sol, const Tolerance &tol = {});

/// Gram matrix of the error images of the assembled state.
GramReport gram_check(const SchmidtState &state, const ErrorModel &err, const Tolerance &tol = {});

struct IndexSetDerivation {
    IndexSets sets;
    /// Per (J, i): ||M_i^(J) - sum_{k in X^(J,i)} f_k L_k||_F
    std::map<OutcomeKey, double> residuals;
};

/// Expands each measurement operator over the error operators through
/// f^(J,i)_k = (d/alpha) <(I(x)L_k)Psi | (I(x)M_i^(J))Psi>. Within a family,
/// an error index is kept only in the outcome where its coefficient is
/// largest, so the sets are disjoint by construction and any overlap shows up
/// as reconstruction residual.
///
/// Throws InvalidInput when the Gram check fails or dimensions disagree, and
/// DecompositionError naming the first offending (J, i) when a residual
/// exceeds eps_eq or two outcomes of one family both need the same index.
IndexSetDerivation derive_index_sets(const SchmidtState &state, const ErrorModel &err,
                                     const std::vector<MeasurementFamily> &families,
                                     const Tolerance &tol = {},
                                     std::optional<double> support_threshold = std::nullopt);

struct SolutionVerdict {
    bool is_solution = false;
    /// (J, k) -> guessed outcome i, for every Alice outcome that can occur.
    std::map<std::pair<int, int>, int> guess_map;
    /// (J, k) pairs reachable from more than one king outcome.
    std::vector<std::pair<int, int>> conflicts;
    double min_success_probability = 1.0;
    /// max |sum_i p_i - 1| over families
    double king_probability_residual = 0.0;
    /// max |sum_k q_k - 1| over positive-probability king branches
    double alice_probability_residual = 0.0;
};

/// Plays every branch (J, king outcome i, Alice outcome k) with the king on
/// the second factor and decides whether a guess map g(k, J) exists.
SolutionVerdict verify_solution(const SolutionPair &sol,
                                const std::vector<MeasurementFamily> &families,
                                const Tolerance &tol = {}, Exec exec = Exec::parallel);

/// The qubit Bell state together with the basis {2 (I (x) L_k)|Psi>} built
/// from qubit_example_errors().
SolutionPair qubit_example_solution();

} // namespace kingcode
