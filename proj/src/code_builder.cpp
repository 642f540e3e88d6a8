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

#include "kingcode/code_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "kingcode/errors.hpp"
#include "kingcode/solution_engine.hpp"

namespace kingcode {

QuantumCode::QuantumCode(std::vector<std::size_t> ambient_dims, std::vector<StateVector> basis,
                         const Tolerance &tol)
    : ambient_dims_(std::move(ambient_dims)) {
    if (basis.empty()) {
        throw InvalidInput("a code needs at least one basis vector");
    }
    const std::size_t dim = product(ambient_dims_);
    basis_.reserve(basis.size());
    for (auto &b : basis) {
        if (b.dim() != dim) {
            throw InvalidInput("code basis vector does not match the ambient dimension");
        }
        basis_.push_back(b.with_factor_dims(ambient_dims_));
    }
    projector_ = kingcode::projector(basis_, tol);
}

StateVector QuantumCode::superpose(const std::vector<Complex> &coeffs) const {
    if (coeffs.size() != basis_.size()) {
        throw InvalidInput("superpose: one coefficient per basis vector required");
    }
    StateVector out(std::vector<Complex>(ambient_dim()), ambient_dims_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
        out += coeffs[b] * basis_[b];
    }
    return out;
}

namespace {

std::vector<StateVector> images_of(const QuantumCode &code, const std::vector<ComplexMatrix> &errs,
                                   Exec exec) {
    std::vector<StateVector> out;
    out.reserve(errs.size() * code.dimension());
    for (const auto &e : errs) {
        if (!e.is_square() || e.rows() != code.ambient_dim()) {
            throw InvalidInput("error operator does not act on the code's ambient space");
        }
        for (const auto &b : code.basis()) {
            out.push_back(apply(e, b, exec));
        }
    }
    return out;
}

} // namespace

KLReport kl_check(const QuantumCode &code, const std::vector<ComplexMatrix> &errs,
                  bool require_diagonal, const Tolerance &tol, Exec exec) {
    if (errs.empty()) {
        throw InvalidInput("kl_check: no error operators");
    }
    const std::size_t l = errs.size();
    const std::size_t dc = code.dimension();
    // In code-basis coordinates P E_k^dagger E_k' P is the (k, k') block of
    // this Gram matrix, so Frobenius norms can be taken on the blocks.
    const ComplexMatrix g = gram(images_of(code, errs, exec), exec);

    KLReport r;
    r.alpha_matrix = ComplexMatrix(l, l);
    for (std::size_t k = 0; k < l; ++k) {
        for (std::size_t kp = 0; kp < l; ++kp) {
            Complex tr{};
            for (std::size_t b = 0; b < dc; ++b) {
                tr += g(k * dc + b, kp * dc + b);
            }
            const Complex alpha = tr / static_cast<double>(dc);
            r.alpha_matrix(k, kp) = alpha;
            double res = 0.0;
            for (std::size_t b = 0; b < dc; ++b) {
                for (std::size_t bp = 0; bp < dc; ++bp) {
                    const Complex expect = b == bp ? alpha : Complex{};
                    res += std::norm(g(k * dc + b, kp * dc + bp) - expect);
                }
            }
            r.max_residual = std::max(r.max_residual, std::sqrt(res));
        }
    }
    r.diagonal = true;
    for (std::size_t k = 0; k < l; ++k) {
        r.lambdas.push_back(r.alpha_matrix(k, k).real());
        for (std::size_t kp = 0; kp < l; ++kp) {
            if (k != kp && std::abs(r.alpha_matrix(k, kp)) > tol.eps_ortho) {
                r.diagonal = false;
            }
        }
    }
    r.psd_defect = psd_defect(r.alpha_matrix, tol);
    r.pass = r.max_residual <= tol.eps_eq && r.psd_defect <= tol.eps_psd &&
             (!require_diagonal || r.diagonal);
    return r;
}

QuantumCode build_bipartite_code(const SchmidtState &state, std::size_t dim_a,
                                 const std::vector<StateVector> &xi, const Tolerance &tol) {
    const std::size_t d = state.d();
    if (dim_a < d) {
        std::ostringstream os;
        os << "bipartite code needs dA >= d (dA = " << dim_a << ", d = " << d << ")";
        throw InvalidInput(os.str());
    }
    if (xi.size() != dim_a) {
        throw InvalidInput("xi must contain dA vectors");
    }
    for (const auto &v : xi) {
        if (v.dim() != dim_a) {
            throw InvalidInput("xi vectors must have dimension dA");
        }
    }
    if (orthonormality_defect(xi) > tol.eps_eq) {
        throw InvalidInput("xi is not orthonormal");
    }
    const std::vector<std::size_t> dims{dim_a, d};
    std::vector<StateVector> basis;
    for (std::size_t l = 1; l <= dim_a / d; ++l) {
        StateVector v(std::vector<Complex>(dim_a * d), dims);
        for (std::size_t j = 0; j < d; ++j) {
            v += state.eta()[j] * tensor(xi[d * (l - 1) + j], state.basis_k()[j]);
        }
        basis.push_back(std::move(v));
    }
    return QuantumCode(dims, std::move(basis), tol);
}

QuantumCode build_bipartite_code(const SchmidtState &state, std::size_t dim_a,
                                 const Tolerance &tol) {
    std::vector<StateVector> xi;
    for (std::size_t i = 0; i < dim_a; ++i) {
        xi.push_back(StateVector::basis(dim_a, i));
    }
    return build_bipartite_code(state, dim_a, xi, tol);
}

void GhzTuple::validate() const {
    if (indices.size() < 2) {
        throw InvalidInput("GHZ tuples need at least two entries");
    }
    if (modulus < 1) {
        throw InvalidInput("GHZ tuple modulus must be positive");
    }
    for (int i : indices) {
        if (i < 0 || i >= modulus) {
            throw InvalidInput("GHZ tuple entry out of range");
        }
    }
}

StateVector ghz_state(const std::vector<double> &eta, const std::vector<StateVector> &phi,
                      const GhzTuple &t) {
    t.validate();
    const auto d = static_cast<std::size_t>(t.modulus);
    if (eta.size() != d || phi.size() != d) {
        throw InvalidInput("ghz_state: eta and phi must both have d entries");
    }
    for (const auto &p : phi) {
        if (p.dim() != d) {
            throw InvalidInput("ghz_state: phi vectors must have dimension d");
        }
    }
    const std::vector<std::size_t> dims(t.size(), d);
    StateVector out(std::vector<Complex>(product(dims)), dims);
    for (std::size_t j = 0; j < d; ++j) {
        StateVector term = phi[(j + static_cast<std::size_t>(t.indices[0])) % d];
        for (std::size_t u = 1; u < t.size(); ++u) {
            term = tensor(term, phi[(j + static_cast<std::size_t>(t.indices[u])) % d]);
        }
        out += eta[j] * term;
    }
    return out;
}

bool lemma1_predicate(const GhzTuple &a, const GhzTuple &b, std::size_t slot) {
    a.validate();
    b.validate();
    if (a.size() != b.size() || a.modulus != b.modulus) {
        throw InvalidInput("lemma1_predicate: tuples of different shape");
    }
    if (slot < 1 || slot > a.size()) {
        throw InvalidInput("lemma1_predicate: slot out of range");
    }
    const int d = a.modulus;
    std::optional<int> first;
    for (std::size_t u = 0; u < a.size(); ++u) {
        if (u + 1 == slot) {
            continue;
        }
        const int diff = ((a.indices[u] - b.indices[u]) % d + d) % d;
        if (!first) {
            first = diff;
        } else if (*first != diff) {
            return true;
        }
    }
    return false;
}

namespace {

// Bron-Kerbosch with pivoting over 64-bit word bitsets; keeps the first
// maximum clique met in increasing-vertex order.
class MaxClique {
  public:
    explicit MaxClique(const std::vector<std::vector<char>> &adj)
        : n_(adj.size()), words_((n_ + 63) / 64), adj_(n_, Bits(words_, 0)) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (i != j && adj[i][j]) {
                    adj_[i][j / 64] |= std::uint64_t{1} << (j % 64);
                }
            }
        }
    }

    std::vector<std::size_t> solve() {
        Bits p(words_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            p[i / 64] |= std::uint64_t{1} << (i % 64);
        }
        std::vector<std::size_t> r;
        expand(r, p, Bits(words_, 0));
        return best_;
    }

  private:
    using Bits = std::vector<std::uint64_t>;

    static std::size_t count(const Bits &b) {
        std::size_t c = 0;
        for (auto w : b) {
            c += static_cast<std::size_t>(__builtin_popcountll(w));
        }
        return c;
    }

    void expand(std::vector<std::size_t> &r, Bits p, Bits x) {
        const std::size_t pc = count(p);
        if (pc == 0) {
            if (count(x) == 0 && r.size() > best_.size()) {
                best_ = r;
            }
            return;
        }
        if (r.size() + pc <= best_.size()) {
            return;
        }
        // pivot: vertex in P u X with most neighbours in P
        std::size_t pivot = 0;
        std::size_t pivot_deg = 0;
        bool have_pivot = false;
        for (std::size_t u = 0; u < n_; ++u) {
            const bool in_px = ((p[u / 64] | x[u / 64]) >> (u % 64)) & 1U;
            if (!in_px) {
                continue;
            }
            std::size_t deg = 0;
            for (std::size_t w = 0; w < words_; ++w) {
                deg += static_cast<std::size_t>(__builtin_popcountll(p[w] & adj_[u][w]));
            }
            if (!have_pivot || deg > pivot_deg) {
                pivot = u;
                pivot_deg = deg;
                have_pivot = true;
            }
        }
        for (std::size_t v = 0; v < n_; ++v) {
            const bool in_p = (p[v / 64] >> (v % 64)) & 1U;
            const bool pivot_nbr = (adj_[pivot][v / 64] >> (v % 64)) & 1U;
            if (!in_p || pivot_nbr) {
                continue;
            }
            Bits np(words_);
            Bits nx(words_);
            for (std::size_t w = 0; w < words_; ++w) {
                np[w] = p[w] & adj_[v][w];
                nx[w] = x[w] & adj_[v][w];
            }
            r.push_back(v);
            expand(r, std::move(np), std::move(nx));
            r.pop_back();
            p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
            x[v / 64] |= std::uint64_t{1} << (v % 64);
        }
    }

    std::size_t n_;
    std::size_t words_;
    std::vector<Bits> adj_;
    std::vector<std::size_t> best_;
};

// Ambient dimensions above this are outside the dense desk-scale regime.
constexpr std::size_t kMaxGhzAmbientDim = std::size_t{1} << 14;

} // namespace

OrthogonalSelection select_orthogonal_set(const std::vector<double> &eta,
                                          const std::vector<StateVector> &phi, std::size_t n,
                                          std::size_t slot, const ErrorModel &err,
                                          SelectionMode mode, const Tolerance &tol, Exec exec) {
    if (n < 3) {
        throw InvalidInput("multipartite codes need n >= 3 parties (n = 2 leaves no pair of "
                           "positions besides the king's slot)");
    }
    if (slot < 1 || slot > n) {
        throw InvalidInput("king slot out of range");
    }
    const std::size_t d = eta.size();
    if (d < 1 || phi.size() != d) {
        throw InvalidInput("eta and phi must both have d entries");
    }
    if (err.dim() != d) {
        throw InvalidInput("error operators must act on one d-dimensional party");
    }
    std::size_t ambient = 1;
    for (std::size_t u = 0; u < n; ++u) {
        ambient *= d;
        if (ambient > kMaxGhzAmbientDim) {
            throw InvalidInput("GHZ ambient dimension too large for dense construction");
        }
    }
    {
        std::vector<StateVector> psi_basis;
        for (std::size_t j = 0; j < d; ++j) {
            psi_basis.push_back(StateVector::basis(d, j));
        }
        const SchmidtState reference(eta, psi_basis, phi, tol);
        if (!gram_check(reference, err, tol).pass) {
            throw InvalidInput("error operators fail the Gram condition on the Schmidt state");
        }
    }

    // all d^n tuples, last position fastest
    std::vector<GhzTuple> all;
    all.reserve(ambient);
    GhzTuple t{std::vector<int>(n, 0), static_cast<int>(d)};
    for (std::size_t c = 0; c < ambient; ++c) {
        all.push_back(t);
        for (std::size_t u = n; u-- > 0;) {
            if (++t.indices[u] < static_cast<int>(d)) {
                break;
            }
            t.indices[u] = 0;
        }
    }
    std::vector<StateVector> states;
    states.reserve(all.size());
    for (const auto &tuple : all) {
        states.push_back(ghz_state(eta, phi, tuple));
    }

    const ComplexMatrix overlaps = gram(states, exec);
    std::vector<std::size_t> reps;
    for (std::size_t c = 0; c < all.size(); ++c) {
        const bool duplicate = std::any_of(reps.begin(), reps.end(), [&](std::size_t r) {
            return std::abs(overlaps(r, c)) > 1.0 - tol.eps_eq;
        });
        if (!duplicate) {
            reps.push_back(c);
        }
    }
    const std::size_t cand = reps.size();
    if (mode == SelectionMode::exact && cand > kMaxExactCandidates) {
        throw InvalidInput("too many candidates for exact maximum-clique selection");
    }

    const std::vector<std::size_t> dims(n, d);
    const auto lifted = embed_errors(err, slot, dims);
    const std::size_t l = lifted.size();
    std::vector<StateVector> images;
    images.reserve(cand * l);
    for (std::size_t r : reps) {
        for (const auto &lk : lifted) {
            images.push_back(apply(lk, states[r], exec));
        }
    }
    const ComplexMatrix cross = gram(images, exec);

    std::vector<std::vector<char>> adj(cand, std::vector<char>(cand, 0));
    const auto rows = static_cast<std::ptrdiff_t>(cand);
    auto fill_row = [&](std::ptrdiff_t ri) {
        const auto a = static_cast<std::size_t>(ri);
        for (std::size_t b = 0; b < cand; ++b) {
            if (a == b) {
                continue;
            }
            bool ortho = std::abs(overlaps(reps[a], reps[b])) <= tol.eps_ortho;
            for (std::size_t k = 0; k < l && ortho; ++k) {
                for (std::size_t kp = 0; kp < l; ++kp) {
                    if (std::abs(cross(a * l + k, b * l + kp)) > tol.eps_ortho) {
                        ortho = false;
                        break;
                    }
                }
            }
            adj[a][b] = ortho ? 1 : 0;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t a = 0; a < rows; ++a) {
            fill_row(a);
        }
    } else {
        for (std::ptrdiff_t a = 0; a < rows; ++a) {
            fill_row(a);
        }
    }

    std::vector<std::size_t> chosen;
    if (mode == SelectionMode::greedy) {
        for (std::size_t a = 0; a < cand; ++a) {
            if (std::all_of(chosen.begin(), chosen.end(), [&](std::size_t b) { return adj[a][b] != 0; })) {
                chosen.push_back(a);
            }
        }
    } else {
        chosen = MaxClique(adj).solve();
        std::sort(chosen.begin(), chosen.end());
    }

    OrthogonalSelection out;
    out.candidates = cand;
    for (std::size_t a : chosen) {
        out.tuples.push_back(all[reps[a]]);
    }
    return out;
}

MultipartiteCode build_multipartite_code(const std::vector<double> &eta,
                                         const std::vector<StateVector> &phi, std::size_t n,
                                         std::size_t slot, const ErrorModel &err,
                                         SelectionMode mode, const Tolerance &tol, Exec exec) {
    OrthogonalSelection sel = select_orthogonal_set(eta, phi, n, slot, err, mode, tol, exec);
    std::vector<StateVector> basis;
    basis.reserve(sel.tuples.size());
    for (const auto &t : sel.tuples) {
        basis.push_back(ghz_state(eta, phi, t));
    }
    const std::vector<std::size_t> dims(n, eta.size());
    return MultipartiteCode{QuantumCode(dims, std::move(basis), tol), std::move(sel.tuples),
                            sel.candidates};
}

DiscriminationPvm discrimination_pvm(const QuantumCode &code,
                                     const std::vector<ComplexMatrix> &errs,
                                     const Tolerance &tol) {
    const KLReport kl = kl_check(code, errs, true, tol);
    if (!kl.pass) {
        std::ostringstream os;
        os << "code fails the diagonal Knill-Laflamme check (residual " << kl.max_residual
           << (kl.diagonal ? "" : ", off-diagonal alpha") << ")";
        throw VerificationFailure(os.str());
    }
    DiscriminationPvm pvm;
    const std::size_t dim = code.ambient_dim();
    std::vector<StateVector> spanned;
    for (std::size_t k = 0; k < errs.size(); ++k) {
        if (kl.lambdas[k] <= tol.eps_eq) {
            continue;
        }
        std::vector<StateVector> images;
        for (const auto &b : code.basis()) {
            images.push_back(apply(errs[k], b));
        }
        auto basis = orthonormalize(images, tol);
        ComplexMatrix proj = projector(basis, tol);
        spanned.insert(spanned.end(), basis.begin(), basis.end());
        pvm.error_index.push_back(static_cast<int>(k + 1));
        pvm.bases.push_back(std::move(basis));
        pvm.projectors.push_back(std::move(proj));
    }
    // Complete the V_k bases with computational vectors; whatever survives
    // Gram-Schmidt spans the complement. Building the residual from that basis
    // keeps it exactly zero when the V_k already fill the space.
    const std::size_t used = spanned.size();
    for (std::size_t i = 0; i < dim; ++i) {
        spanned.push_back(StateVector::basis(code.ambient_dims(), i));
    }
    const auto completed = orthonormalize(spanned, tol);
    const std::vector<StateVector> rest(completed.begin() + static_cast<std::ptrdiff_t>(used),
                                        completed.end());
    pvm.residual = rest.empty() ? ComplexMatrix(dim, dim) : projector(rest, tol);
    pvm.residual_rank = rest.size();
    return pvm;
}

std::vector<ComplexMatrix> build_recovery(const QuantumCode &code,
                                          const std::vector<ComplexMatrix> &errs,
                                          const Tolerance &tol) {
    const DiscriminationPvm pvm = discrimination_pvm(code, errs, tol);
    const KLReport kl = kl_check(code, errs, true, tol);
    const std::size_t dim = code.ambient_dim();
    std::vector<ComplexMatrix> kraus;
    for (int k : pvm.error_index) {
        const auto ku = static_cast<std::size_t>(k - 1);
        const double scale = 1.0 / std::sqrt(kl.lambdas[ku]);
        ComplexMatrix r(dim, dim);
        for (const auto &b : code.basis()) {
            const StateVector e = scale * apply(errs[ku], b);
            r += ComplexMatrix::outer(b, e);
        }
        kraus.push_back(std::move(r));
    }
    if (pvm.residual_rank > 0) {
        kraus.push_back(pvm.residual);
    }
    return kraus;
}

double pure_state_fidelity(const StateVector &psi, const ComplexMatrix &sigma) {
    const double tr = sigma.trace().real();
    if (!(tr > 0.0)) {
        throw InvalidInput("fidelity: density operator has zero trace");
    }
    return inner(psi, apply(sigma, psi)).real() / (tr * psi.norm_squared());
}

} // namespace kingcode
