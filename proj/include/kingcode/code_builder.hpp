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
 * Quantum codes for the mean king game: the bipartite code spanned by
 * shifted copies of a Schmidt state, the multipartite code spanned by
 * mutually orthogonal generalised GHZ states, Knill-Laflamme checks, and the
 * measurement and recovery that go with a code.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kingcode/model.hpp"

namespace kingcode {

/// An orthonormal basis of a subspace together with its projector.
class QuantumCode {
  public:
    /// Vectors are re-tagged with ambient_dims; throws InvalidInput unless the
    /// basis is nonempty, matches the ambient dimension and is orthonormal.
    QuantumCode(std::vector<std::size_t> ambient_dims, std::vector<StateVector> basis,
                const Tolerance &tol = {});

    [[nodiscard]] const std::vector<std::size_t> &ambient_dims() const noexcept {
        return ambient_dims_;
    }
    [[nodiscard]] std::size_t ambient_dim() const noexcept { return projector_.rows(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return basis_.size(); }
    [[nodiscard]] const std::vector<StateVector> &basis() const noexcept { return basis_; }
    [[nodiscard]] const ComplexMatrix &projector() const noexcept { return projector_; }

    /// sum_b c_b |b>
    [[nodiscard]] StateVector superpose(const std::vector<Complex> &coeffs) const;

  private:
    std::vector<std::size_t> ambient_dims_;
    std::vector<StateVector> basis_;
    ComplexMatrix projector_;
};

struct KLReport {
    ComplexMatrix alpha_matrix; ///< alpha_kk' = tr(P E_k^dagger E_k' P) / d'
    bool diagonal = false;
    std::vector<double> lambdas; ///< real diagonal of alpha_matrix
    double max_residual = 0.0;   ///< max_kk' ||P E_k^dagger E_k' P - alpha_kk' P||_F
    double psd_defect = 0.0;
    bool pass = false;
};

/// Knill-Laflamme check of `code` against errors acting on the full ambient
/// space.
KLReport kl_check(const QuantumCode &code, const std::vector<ComplexMatrix> &errs,
                  bool require_diagonal, const Tolerance &tol = {}, Exec exec = Exec::parallel);

/// Span of sum_j eta_j |xi_{d(l-1)+j}> (x) |phi_j>, l = 1..floor(dA/d), on
/// C^dA (x) C^d. Throws InvalidInput when dA < d or xi is not an orthonormal
/// basis of C^dA.
QuantumCode build_bipartite_code(const SchmidtState &state, std::size_t dim_a,
                                 const std::vector<StateVector> &xi, const Tolerance &tol = {});
/// Same with xi the computational basis.
QuantumCode build_bipartite_code(const SchmidtState &state, std::size_t dim_a,
                                 const Tolerance &tol = {});

/// Shift tuple (i_1..i_n) with entries taken mod `modulus`.
struct GhzTuple {
    std::vector<int> indices;
    int modulus = 2;

    /// n >= 2, modulus >= 1, entries in [0, modulus).
    void validate() const;
    [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
    friend auto operator<=>(const GhzTuple &, const GhzTuple &) = default;
};

/// sum_j eta_j |phi_{j+i_1}> (x) ... (x) |phi_{j+i_n}>, indices mod d.
StateVector ghz_state(const std::vector<double> &eta, const std::vector<StateVector> &phi,
                      const GhzTuple &t);

/// True iff two distinct positions s, t (both != slot, 1-based) have
/// (i_s - i'_s) mod d != (i_t - i'_t) mod d. Always false for n < 3.
bool lemma1_predicate(const GhzTuple &a, const GhzTuple &b, std::size_t slot);

enum class SelectionMode { greedy, exact };

/// Candidate limit for exact maximum-clique selection.
inline constexpr std::size_t kMaxExactCandidates = 4096;

struct OrthogonalSelection {
    std::vector<GhzTuple> tuples;
    std::size_t candidates = 0; ///< distinct states after collapsing duplicates
};

/// Pairwise error-orthogonal GHZ tuples: <L_k Psi_t | L_k' Psi_t'> = 0 for all
/// k, k' and t != t' with L on `slot`. Duplicate states are collapsed to the
/// lexicographically smallest tuple first.
OrthogonalSelection select_orthogonal_set(const std::vector<double> &eta,
                                          const std::vector<StateVector> &phi, std::size_t n,
                                          std::size_t slot, const ErrorModel &err,
                                          SelectionMode mode, const Tolerance &tol = {},
                                          Exec exec = Exec::parallel);

struct MultipartiteCode {
    QuantumCode code;
    std::vector<GhzTuple> tuples;
    std::size_t candidates = 0;
};

MultipartiteCode build_multipartite_code(const std::vector<double> &eta,
                                         const std::vector<StateVector> &phi, std::size_t n,
                                         std::size_t slot, const ErrorModel &err,
                                         SelectionMode mode, const Tolerance &tol = {},
                                         Exec exec = Exec::parallel);

/// Alice's measurement: projectors onto the error images V_k = E_k C for the
/// errors with lambda_k > eps_eq, plus the projector onto the rest.
struct DiscriminationPvm {
    std::vector<int> error_index;                 ///< 1-based k for each subspace
    std::vector<std::vector<StateVector>> bases;  ///< orthonormal basis of V_k
    std::vector<ComplexMatrix> projectors;        ///< Pi_k
    ComplexMatrix residual;                       ///< I - sum Pi_k
    std::size_t residual_rank = 0;
};

/// Throws VerificationFailure when the diagonal Knill-Laflamme check fails.
DiscriminationPvm discrimination_pvm(const QuantumCode &code,
                                     const std::vector<ComplexMatrix> &errs,
                                     const Tolerance &tol = {});

/// Kraus operators of a trace-preserving recovery: R_k = sum_b |b><e_kb| with
/// e_kb = E_k|b>/sqrt(lambda_k), followed by the residual projector.
std::vector<ComplexMatrix> build_recovery(const QuantumCode &code,
                                          const std::vector<ComplexMatrix> &errs,
                                          const Tolerance &tol = {});

/// Fidelity <psi|sigma|psi>/tr(sigma) of a pure state with an unnormalised
/// density operator.
double pure_state_fidelity(const StateVector &psi, const ComplexMatrix &sigma);

} // namespace kingcode
