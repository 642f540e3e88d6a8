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

#include "kingcode/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kingcode/errors.hpp"

namespace kingcode {

void Tolerance::validate() const {
    for (double v : {eps_eq, eps_ortho, eps_psd}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput("tolerances must be strictly positive and finite");
        }
    }
}

namespace {

bool finite(const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw InvalidInput(os.str());
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidInput("matrix entry count does not equal rows x cols");
    }
    if (!all_finite()) {
        throw InvalidInput("matrix has non-finite entries");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() > 0 ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw InvalidInput("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(const StateVector &ket, const StateVector &bra) {
    ComplexMatrix m(ket.dim(), bra.dim());
    for (std::size_t i = 0; i < ket.dim(); ++i) {
        for (std::size_t j = 0; j < bra.dim(); ++j) {
            m(i, j) = ket[i] * std::conj(bra[j]);
        }
    }
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto &z : data_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

bool ComplexMatrix::all_finite() const { return std::all_of(data_.begin(), data_.end(), finite); }

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix +");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix -");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b, Exec exec) {
    if (a.cols() != b.rows()) {
        throw InvalidInput("matrix *: inner dimensions differ");
    }
    ComplexMatrix c(a.rows(), b.cols());
    kernels::matmul(exec, a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
    return c;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    return multiply(a, b, Exec::parallel);
}

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)), factor_dims_{amplitudes_.size()} {
    if (amplitudes_.empty()) {
        throw InvalidInput("state vector must have at least one amplitude");
    }
    if (!std::all_of(amplitudes_.begin(), amplitudes_.end(), finite)) {
        throw InvalidInput("state vector has non-finite amplitudes");
    }
}

StateVector::StateVector(std::vector<Complex> amplitudes, std::vector<std::size_t> factor_dims)
    : amplitudes_(std::move(amplitudes)), factor_dims_(std::move(factor_dims)) {
    if (factor_dims_.empty() ||
        std::any_of(factor_dims_.begin(), factor_dims_.end(), [](auto d) { return d == 0; })) {
        throw InvalidInput("factor dimensions must be a nonempty list of positive values");
    }
    if (product(factor_dims_) != amplitudes_.size()) {
        throw InvalidInput("amplitude count does not equal the product of factor dimensions");
    }
    if (!std::all_of(amplitudes_.begin(), amplitudes_.end(), finite)) {
        throw InvalidInput("state vector has non-finite amplitudes");
    }
}

StateVector StateVector::basis(std::vector<std::size_t> factor_dims, std::size_t index) {
    const std::size_t dim = product(factor_dims);
    if (index >= dim) {
        throw InvalidInput("basis index out of range");
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(std::move(amps), std::move(factor_dims));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    return basis(std::vector<std::size_t>{dim}, index);
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &z : amplitudes_) {
        s += std::norm(z);
    }
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) {
        throw InvalidInput("cannot normalise a zero vector");
    }
    StateVector out = *this;
    out *= 1.0 / n;
    return out;
}

StateVector StateVector::with_factor_dims(std::vector<std::size_t> factor_dims) const {
    return StateVector(amplitudes_, std::move(factor_dims));
}

StateVector &StateVector::operator+=(const StateVector &other) {
    if (dim() != other.dim()) {
        throw InvalidInput("vector +: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); ++i) {
        amplitudes_[i] += other.amplitudes_[i];
    }
    return *this;
}

StateVector &StateVector::operator-=(const StateVector &other) {
    if (dim() != other.dim()) {
        throw InvalidInput("vector -: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); ++i) {
        amplitudes_[i] -= other.amplitudes_[i];
    }
    return *this;
}

StateVector &StateVector::operator*=(Complex scale) {
    for (auto &z : amplitudes_) {
        z *= scale;
    }
    return *this;
}

Complex inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw InvalidInput("inner product: dimension mismatch");
    }
    return kernels::inner(a.amplitudes(), b.amplitudes());
}

StateVector apply(const ComplexMatrix &m, const StateVector &v, Exec exec) {
    if (!m.is_square() || m.cols() != v.dim()) {
        throw InvalidInput("apply: operator dimension does not match the state");
    }
    StateVector out = v;
    kernels::matvec(exec, m.data(), v.amplitudes(), out.amplitudes(), m.rows(), m.cols());
    return out;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    kernels::kron(Exec::parallel, a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols(),
                  out.data());
    return out;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<Complex> amps(a.dim() * b.dim());
    kernels::kron(Exec::serial, a.amplitudes(), a.dim(), 1, b.amplitudes(), b.dim(), 1, amps);
    std::vector<std::size_t> dims = a.factor_dims();
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
    return StateVector(std::move(amps), std::move(dims));
}

ComplexMatrix adjoint(const ComplexMatrix &m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = std::conj(m(i, j));
        }
    }
    return out;
}

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

namespace {

std::vector<std::span<const Complex>> views(const std::vector<StateVector> &vs) {
    std::vector<std::span<const Complex>> out;
    out.reserve(vs.size());
    for (const auto &v : vs) {
        out.push_back(v.amplitudes());
    }
    return out;
}

void require_common_dim(const std::vector<StateVector> &vs, std::size_t dim) {
    for (const auto &v : vs) {
        if (v.dim() != dim) {
            throw InvalidInput("vectors must share one dimension");
        }
    }
}

} // namespace

ComplexMatrix cross_gram(const std::vector<StateVector> &lhs, const std::vector<StateVector> &rhs,
                         Exec exec) {
    if (!lhs.empty()) {
        require_common_dim(lhs, lhs.front().dim());
        require_common_dim(rhs, lhs.front().dim());
    }
    return ComplexMatrix(lhs.size(), rhs.size(), kernels::cross_gram(exec, views(lhs), views(rhs)));
}

ComplexMatrix gram(const std::vector<StateVector> &vs, Exec exec) {
    return cross_gram(vs, vs, exec);
}

double orthonormality_defect(const std::vector<StateVector> &vs) {
    const ComplexMatrix g = gram(vs);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const Complex expected = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g(i, j) - expected));
        }
    }
    return worst;
}

std::vector<StateVector> orthonormalize(const std::vector<StateVector> &vs, const Tolerance &tol) {
    std::vector<StateVector> out;
    if (vs.empty()) {
        return out;
    }
    const auto &dims = vs.front().factor_dims();
    for (const auto &v : vs) {
        if (v.factor_dims() != dims) {
            throw InvalidInput("orthonormalize: vectors must share factor dimensions");
        }
    }
    for (const auto &v : vs) {
        StateVector r = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &q : out) {
                r -= inner(q, r) * q;
            }
        }
        const double n = r.norm();
        if (n < tol.eps_ortho) {
            continue;
        }
        r *= 1.0 / n;
        out.push_back(std::move(r));
    }
    return out;
}

ComplexMatrix projector(const std::vector<StateVector> &basis, const Tolerance &tol) {
    if (basis.empty()) {
        throw InvalidInput("projector: empty basis");
    }
    const std::size_t dim = basis.front().dim();
    require_common_dim(basis, dim);
    const double defect = orthonormality_defect(basis);
    if (defect > tol.eps_eq) {
        std::ostringstream os;
        os << "projector: basis is not orthonormal (max |G - I| = " << defect << ")";
        throw InvalidInput(os.str());
    }
    ComplexMatrix p(dim, dim);
    for (const auto &b : basis) {
        for (std::size_t i = 0; i < dim; ++i) {
            if (b[i] == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                p(i, j) += b[i] * std::conj(b[j]);
            }
        }
    }
    return p;
}

double hermiticity_defect(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw InvalidInput("hermiticity check needs a square matrix");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return worst;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw InvalidInput("eigenvalues need a square matrix");
    }
    const auto n = static_cast<Eigen::Index>(m.rows());
    if (n == 0) {
        return {};
    }
    Eigen::MatrixXcd e(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // symmetrise so round-off asymmetry does not leak into the solver
            e(i, j) = 0.5 * (m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                             std::conj(m(static_cast<std::size_t>(j), static_cast<std::size_t>(i))));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw VerificationFailure("Hermitian eigenvalue solver did not converge");
    }
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double psd_defect(const ComplexMatrix &m, const Tolerance &tol) {
    if (!m.is_square()) {
        throw InvalidInput("psd_defect: matrix is not square");
    }
    const double herm = hermiticity_defect(m);
    if (herm > tol.eps_eq) {
        std::ostringstream os;
        os << "psd_defect: matrix is not Hermitian (max |m - m^dagger| = " << herm << ")";
        throw InvalidInput(os.str());
    }
    const auto ev = hermitian_eigenvalues(m);
    if (ev.empty()) {
        return 0.0;
    }
    return std::max(0.0, -ev.front());
}

std::size_t hermitian_rank(const ComplexMatrix &m, double threshold) {
    const auto ev = hermitian_eigenvalues(m);
    return static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [&](double v) { return v > threshold; }));
}

double distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "distance");
    double s = 0.0;
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < ad.size(); ++i) {
        s += std::norm(ad[i] - bd[i]);
    }
    return std::sqrt(s);
}

ComplexMatrix apply_channel(const std::vector<ComplexMatrix> &kraus, const ComplexMatrix &rho) {
    if (!rho.is_square()) {
        throw InvalidInput("apply_channel: density operator must be square");
    }
    ComplexMatrix out(rho.rows(), rho.cols());
    bool first = true;
    for (const auto &k : kraus) {
        if (k.cols() != rho.rows()) {
            throw InvalidInput("apply_channel: Kraus operator does not act on this space");
        }
        if (first) {
            out = ComplexMatrix(k.rows(), k.rows());
            first = false;
        }
        out += k * rho * adjoint(k);
    }
    return out;
}

} // namespace kingcode
