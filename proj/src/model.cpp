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

#include "kingcode/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "kingcode/errors.hpp"

namespace kingcode {

SchmidtState::SchmidtState(std::vector<double> eta, std::vector<StateVector> basis_a,
                           std::vector<StateVector> basis_k, const Tolerance &tol)
    : eta_(std::move(eta)), basis_a_(std::move(basis_a)), basis_k_(std::move(basis_k)) {
    const std::size_t d = eta_.size();
    if (d == 0) {
        throw InvalidInput("Schmidt state needs at least one coefficient");
    }
    if (basis_a_.size() != d || basis_k_.size() != d) {
        throw InvalidInput("Schmidt state: eta, basis_a and basis_k must have equal length");
    }
    double norm2 = 0.0;
    for (double e : eta_) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw InvalidInput("Schmidt coefficients must be strictly positive");
        }
        norm2 += e * e;
    }
    if (std::abs(norm2 - 1.0) > tol.eps_eq) {
        throw InvalidInput("Schmidt coefficients must satisfy sum eta_j^2 = 1");
    }
    for (const auto &v : basis_k_) {
        if (v.dim() != d) {
            throw InvalidInput("basis_k vectors must have dimension d");
        }
    }
    const std::size_t da = basis_a_.front().dim();
    if (da < d) {
        throw InvalidInput("basis_a vectors must have dimension at least d");
    }
    for (const auto &v : basis_a_) {
        if (v.dim() != da) {
            throw InvalidInput("basis_a vectors must share one dimension");
        }
    }
    if (orthonormality_defect(basis_a_) > tol.eps_eq) {
        throw InvalidInput("basis_a is not orthonormal");
    }
    if (orthonormality_defect(basis_k_) > tol.eps_eq) {
        throw InvalidInput("basis_k is not orthonormal");
    }
}

SchmidtState SchmidtState::maximally_entangled(std::size_t d) {
    std::vector<StateVector> a;
    std::vector<StateVector> k;
    for (std::size_t j = 0; j < d; ++j) {
        a.push_back(StateVector::basis(d, j));
        k.push_back(StateVector::basis(d, j));
    }
    return SchmidtState(std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))),
                        std::move(a), std::move(k));
}

double SchmidtState::min_eta_squared() const {
    const double m = *std::min_element(eta_.begin(), eta_.end());
    return m * m;
}

StateVector SchmidtState::assemble() const {
    StateVector out(std::vector<Complex>(dim_a() * d()), {dim_a(), d()});
    for (std::size_t j = 0; j < d(); ++j) {
        out += eta_[j] * tensor(basis_a_[j], basis_k_[j]);
    }
    return out;
}

void MeasurementFamily::validate(const Tolerance &tol) const {
    if (ops.empty()) {
        throw InvalidInput("measurement family has no operators");
    }
    const std::size_t n = ops.front().rows();
    ComplexMatrix sum(n, n);
    for (const auto &m : ops) {
        if (!m.is_square() || m.rows() != n) {
            throw InvalidInput("measurement operators must be square and equally sized");
        }
        sum += adjoint(m) * m;
    }
    const double dev = distance(sum, ComplexMatrix::identity(n));
    if (dev > tol.eps_eq) {
        std::ostringstream os;
        os << "measurement family " << label << " is not complete (|sum M^dagger M - I| = " << dev
           << ")";
        throw InvalidInput(os.str());
    }
}

ComplexMatrix ErrorModel::completeness() const {
    const std::size_t n = dim();
    ComplexMatrix sum(n, n);
    for (const auto &l : kraus) {
        sum += adjoint(l) * l;
    }
    return sum;
}

void ErrorModel::validate(const Tolerance &tol) const {
    if (kraus.empty()) {
        throw InvalidInput("error model has no Kraus operators");
    }
    const std::size_t n = kraus.front().rows();
    for (const auto &l : kraus) {
        if (!l.is_square() || l.rows() != n) {
            throw InvalidInput("Kraus operators must be square and equally sized");
        }
    }
    const double defect = psd_defect(ComplexMatrix::identity(n) - completeness(), tol);
    if (defect > tol.eps_psd) {
        std::ostringstream os;
        os << "error model is trace increasing (psd defect " << defect << ")";
        throw InvalidInput(os.str());
    }
}

IndexSets::IndexSets(std::map<OutcomeKey, std::vector<int>> sets,
                     std::map<std::pair<OutcomeKey, int>, Complex> coeffs)
    : sets_(std::move(sets)), coeffs_(std::move(coeffs)) {
    std::map<int, std::set<int>> used;
    std::size_t expected_coeffs = 0;
    for (auto &[key, ks] : sets_) {
        if (ks.empty()) {
            std::ostringstream os;
            os << "index set X(" << key.first << "," << key.second << ") is empty";
            throw InvalidInput(os.str());
        }
        std::sort(ks.begin(), ks.end());
        if (std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
            throw InvalidInput("index set lists an error index twice");
        }
        for (int k : ks) {
            if (k < 1) {
                throw InvalidInput("error indices are 1-based");
            }
            if (!used[key.first].insert(k).second) {
                std::ostringstream os;
                os << "index sets of family " << key.first << " share error index " << k;
                throw InvalidInput(os.str());
            }
            if (!coeffs_.contains({key, k})) {
                throw InvalidInput("missing expansion coefficient for an index set entry");
            }
        }
        expected_coeffs += ks.size();
    }
    if (coeffs_.size() != expected_coeffs) {
        throw InvalidInput("expansion coefficients given for indices outside the sets");
    }
}

IndexSets IndexSets::with_unit_coefficients(std::map<OutcomeKey, std::vector<int>> sets) {
    std::map<std::pair<OutcomeKey, int>, Complex> coeffs;
    for (const auto &[key, ks] : sets) {
        for (int k : ks) {
            coeffs[{key, k}] = 1.0;
        }
    }
    return IndexSets(std::move(sets), std::move(coeffs));
}

const std::vector<int> &IndexSets::at(int family, int outcome) const {
    auto it = sets_.find({family, outcome});
    if (it == sets_.end()) {
        throw InvalidInput("no index set for this (J, i)");
    }
    return it->second;
}

Complex IndexSets::coeff(int family, int outcome, int k) const {
    auto it = coeffs_.find({{family, outcome}, k});
    if (it == coeffs_.end()) {
        throw InvalidInput("no coefficient for this (J, i, k)");
    }
    return it->second;
}

int IndexSets::max_index() const {
    int m = 0;
    for (const auto &[key, ks] : sets_) {
        m = std::max(m, ks.back());
    }
    return m;
}

std::optional<int> IndexSets::owner(int family, int k) const {
    for (auto it = sets_.lower_bound({family, std::numeric_limits<int>::min()});
         it != sets_.end() && it->first.first == family; ++it) {
        if (std::binary_search(it->second.begin(), it->second.end(), k)) {
            return it->first.second;
        }
    }
    return std::nullopt;
}

BornOutcome born(const ComplexMatrix &op, const StateVector &state, const Tolerance &tol) {
    if (!op.is_square() || op.rows() != state.dim()) {
        throw InvalidInput("born: operator dimension does not match the state");
    }
    StateVector v = apply(op, state);
    const double p = v.norm_squared();
    BornOutcome out;
    out.probability = p;
    if (p >= tol.eps_ortho * tol.eps_ortho) {
        v *= 1.0 / std::sqrt(p);
        out.post = std::move(v);
    }
    return out;
}

ComplexMatrix embed_on_slot(const ComplexMatrix &op, std::size_t slot,
                            const std::vector<std::size_t> &dims) {
    if (slot < 1 || slot > dims.size()) {
        throw InvalidInput("slot out of range");
    }
    if (!op.is_square() || op.rows() != dims[slot - 1]) {
        throw InvalidInput("operator dimension does not match the slot dimension");
    }
    const std::size_t left = product(std::span(dims).first(slot - 1));
    const std::size_t right = product(std::span(dims).subspan(slot));
    ComplexMatrix out = op;
    if (left > 1) {
        out = tensor(ComplexMatrix::identity(left), out);
    }
    if (right > 1) {
        out = tensor(out, ComplexMatrix::identity(right));
    }
    return out;
}

std::vector<ComplexMatrix> embed_errors(const ErrorModel &err, std::size_t slot,
                                        const std::vector<std::size_t> &dims) {
    std::vector<ComplexMatrix> out;
    out.reserve(err.size());
    for (const auto &l : err.kraus) {
        out.push_back(embed_on_slot(l, slot, dims));
    }
    return out;
}

std::vector<MeasurementFamily> qubit_king_measurements() {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    auto proj = [](const StateVector &v) { return ComplexMatrix::outer(v, v); };
    const StateVector plus({s, s});
    const StateVector minus({s, -s});
    const StateVector plus_y({s, s * i});
    const StateVector minus_y({s, -s * i});
    const StateVector zero = StateVector::basis(2, 0);
    const StateVector one = StateVector::basis(2, 1);
    return {
        MeasurementFamily{1, {proj(plus), proj(minus)}},
        MeasurementFamily{2, {proj(plus_y), proj(minus_y)}},
        MeasurementFamily{3, {proj(zero), proj(one)}},
    };
}

ErrorModel qubit_example_errors() {
    const Complex i{0.0, 1.0};
    const double q = 0.25;
    return ErrorModel{{
        q * ComplexMatrix{{2.0, 1.0 - i}, {1.0 + i, 0.0}},
        q * ComplexMatrix{{2.0, -1.0 + i}, {-1.0 - i, 0.0}},
        q * ComplexMatrix{{0.0, 1.0 + i}, {1.0 - i, 2.0}},
        q * ComplexMatrix{{0.0, -1.0 - i}, {-1.0 + i, 2.0}},
    }};
}

IndexSets qubit_example_index_sets() {
    return IndexSets::with_unit_coefficients({
        {{1, 1}, {1, 3}},
        {{1, 2}, {2, 4}},
        {{2, 1}, {1, 4}},
        {{2, 2}, {2, 3}},
        {{3, 1}, {1, 2}},
        {{3, 2}, {3, 4}},
    });
}

} // namespace kingcode
