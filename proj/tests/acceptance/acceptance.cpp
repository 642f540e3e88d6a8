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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Tolerances and time limits are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "kingcode/code_builder.hpp"
#include "kingcode/errors.hpp"
#include "kingcode/protocol.hpp"
#include "kingcode/solution_engine.hpp"
#include "oracles.hpp"

using namespace kingcode;

namespace {

constexpr double kGoldenTol = 1e-12;
constexpr double kTol = 1e-9;
constexpr double kTupleTol = 1e-12;
constexpr double kNegativeSuccessMax = 0.5;
constexpr double kPerturbedResidualMin = 1e-3;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string &what) {
        if (!cond) {
            if (pass) {
                detail << "first failure: " << what << "; ";
            }
            pass = false;
        }
    }
};

int g_failures = 0;

void criterion(const char *id, const char *title, double limit_seconds,
               const std::function<void(Outcome &)> &body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception &e) {
        o.pass = false;
        o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0.0 && secs >= limit_seconds) {
        o.pass = false;
        o.detail << "runtime " << secs << " s exceeds " << limit_seconds << " s; ";
    }
    std::string timing = std::to_string(secs).substr(0, 5) + " s";
    if (limit_seconds > 0.0) {
        timing += ", limit " + std::to_string(static_cast<int>(limit_seconds)) + " s";
    }
    std::printf("[%s] %s %s (%s) %s\n", o.pass ? "PASS" : "FAIL", id, title, timing.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) {
        ++g_failures;
    }
}

const double kS = 1.0 / std::sqrt(2.0);

StateVector bell_state() { return StateVector(std::vector<Complex>{kS, 0.0, 0.0, kS}, {2, 2}); }

QuantumCode bell_code() { return QuantumCode({2, 2}, {bell_state()}); }

GameConfig qubit_game(QuantumCode code, std::size_t slot, std::size_t n_random, std::uint64_t seed) {
    return GameConfig{std::move(code),           qubit_king_measurements(), qubit_example_errors(),
                      qubit_example_index_sets(), slot,                      seed,
                      n_random};
}

double phase_aligned_error(const ComplexMatrix &a, const ComplexMatrix &b) {
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        overlap += std::conj(b.data()[i]) * a.data()[i];
    }
    if (std::abs(overlap) == 0.0) {
        return oracle::max_abs_diff(a, b);
    }
    return oracle::max_abs_diff(a, (overlap / std::abs(overlap)) * b);
}

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const ComplexMatrix &m) {
    EMat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
        }
    }
    return out;
}

EMat psd_sqrt(const EMat &m) {
    const EMat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<EMat> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    const EMat sr = psd_sqrt(to_eigen(rho));
    const EMat inner = sr * to_eigen(sigma) * sr;
    Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (inner + inner.adjoint()));
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        tr += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    return tr * tr;
}

std::vector<ComplexMatrix> lifted_errors(std::size_t slot, const std::vector<std::size_t> &dims) {
    return embed_errors(qubit_example_errors(), slot, dims);
}

void check_lambdas(Outcome &o, const KLReport &kl, const std::string &where) {
    o.require(kl.pass && kl.diagonal, where + ": KL diagonal check");
    for (double l : kl.lambdas) {
        o.require(std::abs(l - 0.25) <= kTol, where + ": lambda = 1/4");
    }
}

} // namespace

int main() {
    std::printf("kingcode acceptance suite\n");

    criterion("AC1", "golden qubit example", 1.0, [](Outcome &o) {
        const ErrorModel e = qubit_example_errors();
        const auto literal = oracle::qubit_errors();
        for (std::size_t k = 0; k < 4; ++k) {
            o.require(oracle::max_abs_diff(e.kraus[k], literal[k]) == 0.0, "built-in L_k literal");
        }
        const double comp = distance(e.completeness(), ComplexMatrix::identity(2));
        o.require(comp <= kGoldenTol, "completeness");

        const IndexSets table = qubit_example_index_sets();
        double worst = 0.0;
        int identities = 0;
        for (const auto &f : qubit_king_measurements()) {
            for (std::size_t i = 0; i < f.ops.size(); ++i) {
                ComplexMatrix sum(2, 2);
                for (int k : table.at(f.label, static_cast<int>(i + 1))) {
                    sum += e.kraus[static_cast<std::size_t>(k - 1)];
                }
                worst = std::max(worst, oracle::max_abs_diff(sum, f.ops[i]));
                ++identities;
            }
        }
        o.require(identities == 6, "six decomposition identities");
        o.require(worst <= kGoldenTol, "decomposition identities");

        const GramReport g = gram_check(SchmidtState::maximally_entangled(2), e);
        const double gram_dev = oracle::max_abs_diff(g.gram, 0.25 * ComplexMatrix::identity(4));
        o.require(g.max_offdiag <= kGoldenTol, "Gram off-diagonal");
        o.require(gram_dev <= kGoldenTol, "Gram = I/4");
        o.detail << "completeness " << comp << ", identities " << worst << ", Gram " << gram_dev;
    });

    criterion("AC2", "Bell-code solution", 1.0, [](Outcome &o) {
        const ExhaustiveReport r = run_exhaustive(qubit_game(bell_code(), 2, 20, 0));
        o.require(r.failures.empty(), "no leaks");
        o.require(r.initial_states.size() == 21, "basis + 20 random phases");
        o.require(r.branches.size() == 21 * 6, "all (J, i) branches");
        o.require(r.min_success >= 1.0 - kTol, "min success");
        o.detail << "min success " << r.min_success << " over " << r.branches.size() << " branches";
    });

    criterion("AC3", "bipartite codes dA = 2..8", 10.0, [](Outcome &o) {
        const SchmidtState bell = SchmidtState::maximally_entangled(2);
        double worst = 1.0;
        for (std::size_t da = 2; da <= 8; ++da) {
            const std::string where = "dA=" + std::to_string(da);
            const QuantumCode c = build_bipartite_code(bell, da);
            o.require(c.dimension() == da / 2, where + ": code dimension");
            check_lambdas(o, kl_check(c, lifted_errors(2, {da, 2}), true), where);
            const ExhaustiveReport r = run_exhaustive(qubit_game(c, 2, 20, da));
            o.require(r.failures.empty(), where + ": no leaks");
            o.require(r.min_success >= 1.0 - kTol, where + ": min success");
            worst = std::min(worst, r.min_success);
        }
        o.detail << "worst min success " << worst;
    });

    criterion("AC4", "GHZ codes n = 3..6, every slot", 60.0, [](Outcome &o) {
        const SchmidtState bell = SchmidtState::maximally_entangled(2);
        double worst = 1.0;
        std::ostringstream sizes;
        for (std::size_t n = 3; n <= 6; ++n) {
            for (std::size_t slot = 1; slot <= n; ++slot) {
                const std::string where = "n=" + std::to_string(n) + " l=" + std::to_string(slot);
                const auto mc = build_multipartite_code(bell.eta(), bell.basis_k(), n, slot,
                                                        qubit_example_errors(), SelectionMode::greedy);
                const std::size_t want = std::size_t{1} << (n - 2);
                o.require(mc.tuples.size() == want, where + ": greedy size 2^(n-2)");
                if (n <= 4) {
                    const auto exact = select_orthogonal_set(bell.eta(), bell.basis_k(), n, slot,
                                                             qubit_example_errors(), SelectionMode::exact);
                    o.require(exact.tuples.size() == want, where + ": exact clique size");
                }
                const std::vector<std::size_t> dims(n, 2);
                check_lambdas(o, kl_check(mc.code, lifted_errors(slot, dims), true), where);
                const ExhaustiveReport r = run_exhaustive(qubit_game(mc.code, slot, 10, n * 100 + slot));
                o.require(r.failures.empty(), where + ": no leaks");
                o.require(r.min_success >= 1.0 - kTol, where + ": min success");
                worst = std::min(worst, r.min_success);
            }
            sizes << "g(" << n << ")=" << (std::size_t{1} << (n - 2)) << " ";
        }
        o.detail << sizes.str() << "worst min success " << worst;
    });

    criterion("AC5", "derivation round trip", 0.0, [](Outcome &o) {
        const StateVector psi = bell_state();
        const auto literal = oracle::qubit_errors();
        std::vector<StateVector> pvm;
        for (const auto &l : literal) {
            pvm.push_back(2.0 * apply(embed_on_slot(l, 2, {2, 2}), psi));
        }
        const SolutionPair sol(SchmidtState::maximally_entangled(2), pvm);
        const ErrorModel derived = derive_error_operators(sol);
        double worst = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            worst = std::max(worst, phase_aligned_error(derived.kraus[k], literal[k]));
        }
        o.require(worst <= kTol, "L_k up to phase");
        const auto d = derive_index_sets(sol.state(), derived, qubit_king_measurements());
        o.require(d.sets.sets() == qubit_example_index_sets().sets(), "index sets = table");
        double fdev = 0.0;
        for (const auto &[key, f] : d.sets.coeffs()) {
            fdev = std::max(fdev, std::abs(f - Complex{1.0}));
        }
        o.require(fdev <= kTol, "f = 1");
        o.detail << "max |L - L_ref| " << worst << ", max |f - 1| " << fdev;
    });

    criterion("AC6", "random solution pairs", 0.0, [](Outcome &o) {
        std::mt19937_64 rng(20260601);
        const std::size_t draws = 60;
        double gram_off = 0.0;
        double gram_diag = 0.0;
        double psd = 0.0;
        double cross = 0.0;
        for (std::size_t t = 0; t < draws; ++t) {
            const std::size_t d = 2 + t % 2;
            const auto eta = oracle::random_eta(d, 0.1, rng);
            const SchmidtState s(eta, oracle::random_basis(d, rng), oracle::random_basis(d, rng));
            o.require(*std::min_element(eta.begin(), eta.end()) >= 0.1, "min eta >= 0.1");
            const SolutionPair sol(s, oracle::random_basis(d * d, rng, {d, d}));
            const ErrorModel e = derive_error_operators(sol);
            const double alpha = s.min_eta_squared();
            const double want = alpha / static_cast<double>(d);
            const GramReport g = gram_check(s, e);
            gram_off = std::max(gram_off, g.max_offdiag);
            for (std::size_t k = 0; k < e.size(); ++k) {
                gram_diag = std::max(gram_diag, std::abs(g.gram(k, k) - Complex{want}));
            }
            psd = std::max(psd, psd_defect(ComplexMatrix::identity(d) - e.completeness()));
            for (std::size_t da : {4, 5, 6}) {
                const QuantumCode c = build_bipartite_code(s, da, oracle::random_basis(da, rng));
                const auto lifted = embed_errors(e, 2, {da, d});
                for (std::size_t l1 = 0; l1 < c.dimension(); ++l1) {
                    for (std::size_t l2 = 0; l2 < c.dimension(); ++l2) {
                        for (std::size_t k1 = 0; k1 < e.size(); ++k1) {
                            for (std::size_t k2 = 0; k2 < e.size(); ++k2) {
                                const Complex v = inner(apply(lifted[k1], c.basis()[l1]),
                                                        apply(lifted[k2], c.basis()[l2]));
                                const double target = (k1 == k2 && l1 == l2) ? want : 0.0;
                                cross = std::max(cross, std::abs(v - target));
                            }
                        }
                    }
                }
            }
        }
        o.require(gram_off <= kTol, "Gram off-diagonal");
        o.require(gram_diag <= kTol, "Gram diagonal = alpha/d");
        o.require(psd <= kTol, "sum L^dagger L <= I");
        o.require(cross <= kTol, "bipartite cross-Gram identity");
        o.detail << draws << " draws; off-diag " << gram_off << ", diag " << gram_diag << ", psd "
                 << psd << ", cross-Gram " << cross;
    });

    criterion("AC7", "orthogonality from the tuple condition", 0.0, [](Outcome &o) {
        std::mt19937_64 rng(7777);
        std::size_t checked = 0;
        double worst = 0.0;
        while (checked < 1000) {
            const int d = 2 + static_cast<int>(rng() % 2);
            const std::size_t n = 3 + rng() % 3;
            const std::size_t slot = 1 + rng() % n;
            std::uniform_int_distribution<int> pick(0, d - 1);
            GhzTuple a{std::vector<int>(n), d};
            GhzTuple b{std::vector<int>(n), d};
            for (std::size_t u = 0; u < n; ++u) {
                a.indices[u] = pick(rng);
                b.indices[u] = pick(rng);
            }
            if (!lemma1_predicate(a, b, slot)) {
                continue;
            }
            const auto ud = static_cast<std::size_t>(d);
            const auto eta = oracle::random_eta(ud, 0.1, rng);
            const auto phi = oracle::random_basis(ud, rng);
            const SolutionPair sol(SchmidtState(eta, oracle::random_basis(ud, rng), phi),
                                   oracle::random_basis(ud * ud, rng, {ud, ud}));
            const ErrorModel e = derive_error_operators(sol);
            const std::vector<std::size_t> dims(n, ud);
            const StateVector sa = ghz_state(eta, phi, a);
            const StateVector sb = ghz_state(eta, phi, b);
            const auto lifted = embed_errors(e, slot, dims);
            for (const auto &x : lifted) {
                const StateVector xa = apply(x, sa);
                for (const auto &y : lifted) {
                    worst = std::max(worst, std::abs(inner(xa, apply(y, sb))));
                }
            }
            ++checked;
        }
        o.require(worst <= kTupleTol, "cross-Gram magnitude");
        o.detail << checked << " pairs, max |cross-Gram| " << worst;
    });

    criterion("AC8", "recovery fidelity", 0.0, [](Outcome &o) {
        const SchmidtState bell = SchmidtState::maximally_entangled(2);
        struct Case {
            std::string name;
            QuantumCode code;
            std::vector<ComplexMatrix> errs;
        };
        const auto ghz = build_multipartite_code(bell.eta(), bell.basis_k(), 4, 1, qubit_example_errors(),
                                                 SelectionMode::greedy);
        const std::vector<Case> cases{
            {"(4,1)", bell_code(), lifted_errors(2, {2, 2})},
            {"(16,4)", ghz.code, lifted_errors(1, {2, 2, 2, 2})},
        };
        std::mt19937_64 rng(88);
        for (const auto &c : cases) {
            o.require(c.code.ambient_dim() == (c.name == "(4,1)" ? 4U : 16U), c.name + " ambient");
            const auto rec = build_recovery(c.code, c.errs);
            double worst = 1.0;
            for (int t = 0; t < 10; ++t) {
                const ComplexMatrix rho = oracle::random_code_density(c.code.basis(), rng);
                ComplexMatrix sigma = apply_channel(rec, apply_channel(c.errs, rho));
                sigma *= 1.0 / sigma.trace().real();
                worst = std::min(worst, uhlmann_fidelity(rho, sigma));
            }
            o.require(worst >= 1.0 - kTol, c.name + " fidelity");
            o.detail << c.name << " min fidelity " << worst << "; ";
        }
    });

    criterion("AC9", "negative controls", 0.0, [](Outcome &o) {
        GameConfig cfg = qubit_game(bell_code(), 2, 20, 0);
        cfg.index_sets = IndexSets::with_unit_coefficients({{{1, 1}, {2, 4}},
                                                           {{1, 2}, {1, 3}},
                                                           {{2, 1}, {1, 4}},
                                                           {{2, 2}, {2, 3}},
                                                           {{3, 1}, {1, 2}},
                                                           {{3, 2}, {3, 4}}});
        const ExhaustiveReport r = run_exhaustive(cfg);
        double affected = 0.0;
        for (const auto &b : r.branches) {
            if (b.family == 1) {
                affected = std::max(affected, b.success_prob);
            }
        }
        o.require(r.min_success <= kNegativeSuccessMax, "swapped sets min success");
        o.require(affected <= kNegativeSuccessMax, "swapped sets, J=1 branches");
        o.require(!r.failures.empty(), "leaks reported");

        auto fams = qubit_king_measurements();
        fams[0].ops[0](0, 1) += 0.1;
        double residual = 0.0;
        try {
            derive_index_sets(SchmidtState::maximally_entangled(2), qubit_example_errors(), fams);
            o.require(false, "perturbed family accepted");
        } catch (const DecompositionError &e) {
            residual = e.residual();
        }
        o.require(residual > kPerturbedResidualMin, "perturbed family residual");
        o.detail << "swapped J=1 max success " << affected << ", perturbed residual " << residual;
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
