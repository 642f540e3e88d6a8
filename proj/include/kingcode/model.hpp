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
 * Physical objects of the mean king game: the entangled initial state in
 * Schmidt form, the king's measurement families, Kraus error models, the
 * index sets that tie measurement outcomes to error operators, and the Born
 * rule.
 *
 * Error indices k and outcome indices i are 1-based everywhere.
 */
#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kingcode/numerics.hpp"

namespace kingcode {

/// sum_j eta_j |psi_j> (x) |phi_j>, eta_j > 0, sum eta_j^2 = 1.
class SchmidtState {
  public:
    /// Throws InvalidInput unless all invariants hold. `basis_a` vectors may
    /// live in a space larger than d; `basis_k` vectors must have dimension d.
    SchmidtState(std::vector<double> eta, std::vector<StateVector> basis_a,
                 std::vector<StateVector> basis_k, const Tolerance &tol = {});

    /// Uniform coefficients 1/sqrt(d) on computational bases.
    static SchmidtState maximally_entangled(std::size_t d);

    [[nodiscard]] std::size_t d() const noexcept { return eta_.size(); }
    [[nodiscard]] std::size_t dim_a() const noexcept { return basis_a_.front().dim(); }
    [[nodiscard]] const std::vector<double> &eta() const noexcept { return eta_; }
    [[nodiscard]] const std::vector<StateVector> &basis_a() const noexcept { return basis_a_; }
    [[nodiscard]] const std::vector<StateVector> &basis_k() const noexcept { return basis_k_; }
    /// min_j eta_j^2
    [[nodiscard]] double min_eta_squared() const;

    /// The assembled bipartite ket with factor_dims (dim_a, d).
    [[nodiscard]] StateVector assemble() const;

  private:
    std::vector<double> eta_;
    std::vector<StateVector> basis_a_;
    std::vector<StateVector> basis_k_;
};

/// The king's measurement with label J and operators M_1..M_m.
struct MeasurementFamily {
    int label = 0;
    std::vector<ComplexMatrix> ops;

    /// Square, equal-sized operators with sum M^dagger M = I within eps_eq.
    void validate(const Tolerance &tol = {}) const;
    [[nodiscard]] std::size_t dim() const { return ops.empty() ? 0 : ops.front().rows(); }
};

/// Kraus operators L_1..L_l of a trace non-increasing map.
struct ErrorModel {
    std::vector<ComplexMatrix> kraus;

    /// Square equal-sized operators, I - sum L^dagger L positive semidefinite.
    void validate(const Tolerance &tol = {}) const;
    [[nodiscard]] std::size_t dim() const { return kraus.empty() ? 0 : kraus.front().rows(); }
    [[nodiscard]] std::size_t size() const noexcept { return kraus.size(); }
    /// sum_k L_k^dagger L_k
    [[nodiscard]] ComplexMatrix completeness() const;
};

/// Key (J, i) of an index set.
using OutcomeKey = std::pair<int, int>;

/// X^(J,i) and the expansion coefficients f^(J,i)_k.
class IndexSets {
  public:
    IndexSets() = default;
    /// Throws InvalidInput on empty sets, sets sharing an index within one J,
    /// non-positive indices, or coefficients that do not match the sets
    /// exactly.
    IndexSets(std::map<OutcomeKey, std::vector<int>> sets,
              std::map<std::pair<OutcomeKey, int>, Complex> coeffs);
    /// All coefficients equal to one.
    static IndexSets with_unit_coefficients(std::map<OutcomeKey, std::vector<int>> sets);

    [[nodiscard]] const std::map<OutcomeKey, std::vector<int>> &sets() const noexcept {
        return sets_;
    }
    [[nodiscard]] const std::map<std::pair<OutcomeKey, int>, Complex> &coeffs() const noexcept {
        return coeffs_;
    }
    [[nodiscard]] const std::vector<int> &at(int family, int outcome) const;
    [[nodiscard]] Complex coeff(int family, int outcome, int k) const;
    /// Largest error index mentioned.
    [[nodiscard]] int max_index() const;
    /// The unique outcome i with k in X^(J,i), if any.
    [[nodiscard]] std::optional<int> owner(int family, int k) const;

  private:
    std::map<OutcomeKey, std::vector<int>> sets_;
    std::map<std::pair<OutcomeKey, int>, Complex> coeffs_;
};

struct BornOutcome {
    double probability = 0.0;
    std::optional<StateVector> post; ///< empty for a zero-probability branch
};

/// Outcome probability ||op psi||^2 and normalised post-measurement state.
/// Branches below tol.eps_ortho^2 report no post state.
BornOutcome born(const ComplexMatrix &op, const StateVector &state, const Tolerance &tol = {});

/// I (x) ... (x) op (x) ... (x) I with op on 1-based `slot`.
ComplexMatrix embed_on_slot(const ComplexMatrix &op, std::size_t slot,
                            const std::vector<std::size_t> &dims);

/// Embed every Kraus operator of a model on one slot.
std::vector<ComplexMatrix> embed_errors(const ErrorModel &err, std::size_t slot,
                                        const std::vector<std::size_t> &dims);

/// The three projective qubit measurements in the |+->, |+'-'> (y) and
/// computational bases, labelled J = 1, 2, 3.
std::vector<MeasurementFamily> qubit_king_measurements();

/// The four qubit Kraus operators whose pairwise sums reproduce the qubit
/// king measurements.
ErrorModel qubit_example_errors();

/// Index sets pairing qubit_king_measurements() with qubit_example_errors().
IndexSets qubit_example_index_sets();

} // namespace kingcode
