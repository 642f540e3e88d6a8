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

#include "kingcode/solution_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kingcode/errors.hpp"

namespace kingcode {

SolutionPair::SolutionPair(SchmidtState state, std::vector<StateVector> pvm_basis,
                           const Tolerance &tol)
    : state_(std::move(state)), pvm_(std::move(pvm_basis)) {
    const std::size_t d = state_.d();
    if (state_.dim_a() != d) {
        throw InvalidInput("solution pair: both parties must have dimension d");
    }
    if (pvm_.size() != d * d) {
        throw InvalidInput("solution pair: the measurement basis must have d^2 vectors");
    }
    const std::vector<std::size_t> dims{d, d};
    for (auto &p : pvm_) {
        if (p.dim() != d * d) {
            throw InvalidInput("solution pair: measurement basis vectors must have dimension d^2");
        }
        if (p.factor_dims() != dims) {
            p = p.with_factor_dims(dims);
        }
    }
    if (orthonormality_defect(pvm_) > tol.eps_eq) {
        throw InvalidInput("solution pair: measurement basis is not orthonormal");
    }
}

ErrorModel derive_error_operators(const SolutionPair &sol, const Tolerance &tol) {
    const SchmidtState &st = sol.state();
    const std::size_t d = st.d();
    for (double e : st.eta()) {
        if (e <= tol.eps_eq) {
            throw InvalidInput("Schmidt coefficient too small to invert");
        }
    }
    const double alpha = st.min_eta_squared();
    const double c = std::sqrt(alpha / static_cast<double>(d));

    // <psi_j (x) phi_j'| p_k> for all j, j'
    std::vector<StateVector> product_basis;
    product_basis.reserve(d * d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t jp = 0; jp < d; ++jp) {
            product_basis.push_back(tensor(st.basis_a()[j], st.basis_k()[jp]));
        }
    }
    const ComplexMatrix overlaps = cross_gram(product_basis, sol.pvm_basis());

    ErrorModel out;
    out.kraus.reserve(sol.pvm_basis().size());
    for (std::size_t k = 0; k < sol.pvm_basis().size(); ++k) {
        ComplexMatrix l(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            const double scale = c / st.eta()[j];
            for (std::size_t jp = 0; jp < d; ++jp) {
                const Complex coeff = scale * overlaps(j * d + jp, k);
                if (coeff == Complex{}) {
                    continue;
                }
                l += coeff * ComplexMatrix::outer(st.basis_k()[jp], st.basis_k()[j]);
            }
        }
        out.kraus.push_back(std::move(l));
    }

    const double defect = psd_defect(ComplexMatrix::identity(d) - out.completeness(), tol);
    if (defect > tol.eps_psd) {
        std::ostringstream os;
        os << "derived error operators are trace increasing (psd defect " << defect << ")";
        throw VerificationFailure(os.str());
    }
    return out;
}

namespace {

std::vector<StateVector> error_images(const SchmidtState &state, const ErrorModel &err) {
    const std::vector<std::size_t> dims{state.dim_a(), state.d()};
    const StateVector psi = state.assemble();
    std::vector<StateVector> images;
    images.reserve(err.size());
    for (const auto &l : err.kraus) {
        if (!l.is_square() || l.rows() != state.d()) {
            throw InvalidInput("error operator dimension does not match the state");
        }
        images.push_back(apply(embed_on_slot(l, 2, dims), psi));
    }
    return images;
}

} // namespace

GramReport gram_check(const SchmidtState &state, const ErrorModel &err, const Tolerance &tol) {
    if (err.kraus.empty()) {
        throw InvalidInput("gram_check: empty error model");
    }
    const auto images = error_images(state, err);
    GramReport r;
    r.gram = gram(images);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (std::size_t a = 0; a < r.gram.rows(); ++a) {
        for (std::size_t b = 0; b < r.gram.cols(); ++b) {
            if (a == b) {
                const double v = r.gram(a, a).real();
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
            } else {
                r.max_offdiag = std::max(r.max_offdiag, std::abs(r.gram(a, b)));
            }
        }
    }
    r.diag_spread = hi - lo;
    r.alpha = static_cast<double>(state.d()) * sum / static_cast<double>(r.gram.rows());
    r.pass = r.max_offdiag <= tol.eps_ortho && r.diag_spread <= tol.eps_eq && r.alpha > tol.eps_eq;
    return r;
}

IndexSetDerivation derive_index_sets(const SchmidtState &state, const ErrorModel &err,
                                     const std::vector<MeasurementFamily> &families,
                                     const Tolerance &tol,
                                     std::optional<double> support_threshold) {
    const GramReport g = gram_check(state, err, tol);
    if (!g.pass) {
        throw VerificationFailure(
            "derive_index_sets: error images are not orthogonal with equal norms");
    }
    const double threshold = support_threshold.value_or(tol.eps_ortho);
    const std::size_t d = state.d();
    const std::size_t l = err.size();
    const std::vector<std::size_t> dims{state.dim_a(), d};
    const StateVector psi = state.assemble();
    const auto images = error_images(state, err);
    const double scale = static_cast<double>(d) / g.alpha;

    std::map<OutcomeKey, std::vector<int>> sets;
    std::map<std::pair<OutcomeKey, int>, Complex> coeffs;
    IndexSetDerivation out;

    for (const auto &fam : families) {
        const std::size_t m = fam.ops.size();
        std::vector<std::vector<Complex>> f(m, std::vector<Complex>(l));
        for (std::size_t i = 0; i < m; ++i) {
            if (!fam.ops[i].is_square() || fam.ops[i].rows() != d) {
                throw InvalidInput("measurement operator dimension does not match the state");
            }
            const StateVector v = apply(embed_on_slot(fam.ops[i], 2, dims), psi);
            for (std::size_t k = 0; k < l; ++k) {
                f[i][k] = scale * inner(images[k], v);
            }
        }

        // each error index goes to the outcome with the largest |f|
        std::vector<std::vector<int>> owned(m);
        std::vector<bool> contested(m, false);
        for (std::size_t k = 0; k < l; ++k) {
            std::size_t best = 0;
            std::size_t claims = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (std::abs(f[i][k]) > threshold) {
                    ++claims;
                }
                if (std::abs(f[i][k]) > std::abs(f[best][k])) {
                    best = i;
                }
            }
            if (std::abs(f[best][k]) > threshold) {
                owned[best].push_back(static_cast<int>(k + 1));
            }
            if (claims > 1) {
                for (std::size_t i = 0; i < m; ++i) {
                    if (i != best && std::abs(f[i][k]) > threshold) {
                        contested[i] = true;
                    }
                }
            }
        }

        for (std::size_t i = 0; i < m; ++i) {
            ComplexMatrix recon(d, d);
            for (int k : owned[i]) {
                recon += f[i][static_cast<std::size_t>(k - 1)] *
                         err.kraus[static_cast<std::size_t>(k - 1)];
            }
            const double residual = distance(fam.ops[i], recon);
            const int outcome = static_cast<int>(i + 1);
            out.residuals[{fam.label, outcome}] = residual;
            if (residual > tol.eps_eq || contested[i] || owned[i].empty()) {
                std::ostringstream os;
                os << "M_" << outcome << "^(" << fam.label
                   << ") has no disjoint expansion over the error operators (residual "
                   << residual << (contested[i] ? ", index shared with another outcome" : "")
                   << ")";
                throw DecompositionError(fam.label, outcome, residual, os.str());
            }
            for (int k : owned[i]) {
                coeffs[{{fam.label, outcome}, k}] = f[i][static_cast<std::size_t>(k - 1)];
            }
            sets[{fam.label, outcome}] = std::move(owned[i]);
        }
    }
    out.sets = IndexSets(std::move(sets), std::move(coeffs));
    return out;
}

SolutionVerdict verify_solution(const SolutionPair &sol,
                                const std::vector<MeasurementFamily> &families,
                                const Tolerance &tol, Exec exec) {
    const std::size_t d = sol.state().d();
    const std::vector<std::size_t> dims{d, d};
    const StateVector psi = sol.state().assemble();
    const double zero_prob = tol.eps_ortho * tol.eps_ortho;

    struct Task {
        std::size_t family;
        std::size_t outcome;
        double king_prob = 0.0;
        std::vector<double> alice; // empty when the branch has zero probability
    };
    std::vector<Task> tasks;
    for (std::size_t f = 0; f < families.size(); ++f) {
        if (families[f].dim() != d) {
            throw InvalidInput("verify_solution: measurement dimension does not match the state");
        }
        for (std::size_t i = 0; i < families[f].ops.size(); ++i) {
            tasks.push_back(Task{f, i, 0.0, {}});
        }
    }

    auto run = [&](Task &t) {
        const BornOutcome b =
            born(embed_on_slot(families[t.family].ops[t.outcome], 2, dims), psi, tol);
        t.king_prob = b.probability;
        if (!b.post) {
            return;
        }
        t.alice.resize(sol.pvm_basis().size());
        for (std::size_t k = 0; k < t.alice.size(); ++k) {
            t.alice[k] = std::norm(inner(sol.pvm_basis()[k], *b.post));
        }
    };
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(tasks[static_cast<std::size_t>(t)]);
        }
    } else {
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(tasks[static_cast<std::size_t>(t)]);
        }
    }

    SolutionVerdict v;
    std::map<std::size_t, double> king_sums;
    for (const auto &t : tasks) {
        king_sums[t.family] += t.king_prob;
        if (t.alice.empty()) {
            continue;
        }
        double total = 0.0;
        const int label = families[t.family].label;
        const int outcome = static_cast<int>(t.outcome + 1);
        for (std::size_t k = 0; k < t.alice.size(); ++k) {
            total += t.alice[k];
            if (t.alice[k] <= zero_prob) {
                continue;
            }
            const std::pair<int, int> key{label, static_cast<int>(k + 1)};
            auto [it, inserted] = v.guess_map.emplace(key, outcome);
            if (!inserted && it->second != outcome &&
                std::find(v.conflicts.begin(), v.conflicts.end(), key) == v.conflicts.end()) {
                v.conflicts.push_back(key);
            }
        }
        v.alice_probability_residual = std::max(v.alice_probability_residual, std::abs(total - 1.0));
    }
    for (const auto &[f, s] : king_sums) {
        v.king_probability_residual = std::max(v.king_probability_residual, std::abs(s - 1.0));
    }
    for (const auto &t : tasks) {
        if (t.alice.empty()) {
            continue;
        }
        const int label = families[t.family].label;
        const int outcome = static_cast<int>(t.outcome + 1);
        double success = 0.0;
        for (std::size_t k = 0; k < t.alice.size(); ++k) {
            auto it = v.guess_map.find({label, static_cast<int>(k + 1)});
            if (it != v.guess_map.end() && it->second == outcome) {
                success += t.alice[k];
            }
        }
        v.min_success_probability = std::min(v.min_success_probability, success);
    }
    v.is_solution = v.conflicts.empty() && v.min_success_probability >= 1.0 - tol.eps_eq;
    return v;
}

SolutionPair qubit_example_solution() {
    const SchmidtState bell = SchmidtState::maximally_entangled(2);
    const StateVector psi = bell.assemble();
    std::vector<StateVector> pvm;
    for (const auto &l : qubit_example_errors().kraus) {
        pvm.push_back(2.0 * apply(embed_on_slot(l, 2, {2, 2}), psi));
    }
    return SolutionPair(bell, std::move(pvm));
}

} // namespace kingcode
