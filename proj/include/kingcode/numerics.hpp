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
 * Dense complex matrices and state vectors for small Hilbert spaces
 * (dimension up to roughly a thousand), with tolerance-based comparisons.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "kingcode/kernels.hpp"

namespace kingcode {

/// Comparison bounds used throughout the library.
struct Tolerance {
    double eps_eq = 1e-9;    ///< entrywise / norm equality
    double eps_ortho = 1e-9; ///< an inner product (or residual norm) counts as zero
    double eps_psd = 1e-9;   ///< allowed negative eigenvalue magnitude

    /// Throws InvalidInput unless every bound is strictly positive and finite.
    void validate() const;
};

class StateVector;

/// Row-major dense complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    /// Zero matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major entries; rejects size mismatch and
    /// non-finite entries.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);
    /// Nested rows, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    /// |ket><bra|
    static ComplexMatrix outer(const StateVector &ket, const StateVector &bra);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }
    [[nodiscard]] std::span<Complex> data() noexcept { return data_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    [[nodiscard]] Complex trace() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] bool all_finite() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Matrix product with an explicit execution path.
ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b,
                       Exec exec = Exec::parallel);

/// A ket together with the dimensions of the tensor factors it lives on.
class StateVector {
  public:
    StateVector() = default;
    /// Single-factor vector.
    explicit StateVector(std::vector<Complex> amplitudes);
    /// Rejects amplitude count != product(factor_dims), zero factor dimensions
    /// and non-finite amplitudes.
    StateVector(std::vector<Complex> amplitudes, std::vector<std::size_t> factor_dims);

    /// Computational basis vector |index> of a space with the given factors.
    static StateVector basis(std::vector<std::size_t> factor_dims, std::size_t index);
    static StateVector basis(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] const std::vector<std::size_t> &factor_dims() const noexcept {
        return factor_dims_;
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
    Complex &operator[](std::size_t i) { return amplitudes_[i]; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] double norm_squared() const;
    /// Throws InvalidInput for a (numerically) zero vector.
    [[nodiscard]] StateVector normalized() const;
    /// Same amplitudes, new factorisation of the same total dimension.
    [[nodiscard]] StateVector with_factor_dims(std::vector<std::size_t> factor_dims) const;

    StateVector &operator+=(const StateVector &other);
    StateVector &operator-=(const StateVector &other);
    StateVector &operator*=(Complex scale);
    friend StateVector operator+(StateVector a, const StateVector &b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector &b) { return a -= b; }
    friend StateVector operator*(Complex s, StateVector a) { return a *= s; }
    friend StateVector operator*(StateVector a, Complex s) { return a *= s; }
    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    std::vector<Complex> amplitudes_;
    std::vector<std::size_t> factor_dims_;
};

/// <a|b>
Complex inner(const StateVector &a, const StateVector &b);

/// m |v>, keeping v's factorisation.
StateVector apply(const ComplexMatrix &m, const StateVector &v, Exec exec = Exec::parallel);

/// Kronecker products; factor_dims are concatenated for vectors.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);
StateVector tensor(const StateVector &a, const StateVector &b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix &m);

/// Product of a list of dimensions (1 for an empty list).
std::size_t product(std::span<const std::size_t> dims);

/// Row-major matrix of pairwise inner products <vs_a|vs_b>.
ComplexMatrix gram(const std::vector<StateVector> &vs, Exec exec = Exec::parallel);
/// Row-major matrix of <lhs_a|rhs_b>.
ComplexMatrix cross_gram(const std::vector<StateVector> &lhs,
                         const std::vector<StateVector> &rhs,
                         Exec exec = Exec::parallel);

/// Largest entrywise deviation of gram(vs) from the identity.
double orthonormality_defect(const std::vector<StateVector> &vs);

/// Modified Gram-Schmidt in input order (no pivoting). A vector whose residual
/// norm falls below tol.eps_ortho is dropped. Each vector is orthogonalised
/// twice against the accepted set so the output is orthonormal to round-off.
std::vector<StateVector> orthonormalize(const std::vector<StateVector> &vs,
                                        const Tolerance &tol = {});

/// Sum of |b><b| over an orthonormal basis; throws InvalidInput if the basis
/// is empty or not orthonormal within tol.eps_eq.
ComplexMatrix projector(const std::vector<StateVector> &basis, const Tolerance &tol = {});

/// Largest deviation |m - m^dagger| entrywise.
double hermiticity_defect(const ComplexMatrix &m);

/// max(0, -lambda_min(m)) for Hermitian m. Throws InvalidInput when m is not
/// square or not Hermitian within tol.eps_eq.
double psd_defect(const ComplexMatrix &m, const Tolerance &tol = {});

/// Eigenvalues of a Hermitian matrix in ascending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m);

/// Numerical rank of a Hermitian PSD matrix (eigenvalues above threshold).
std::size_t hermitian_rank(const ComplexMatrix &m, double threshold);

/// Frobenius norm of a - b.
double distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// sum_k K rho K^dagger
ComplexMatrix apply_channel(const std::vector<ComplexMatrix> &kraus, const ComplexMatrix &rho);

} // namespace kingcode
