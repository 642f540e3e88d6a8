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

#include "kingcode/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kingcode/errors.hpp"

namespace kingcode {

void GameConfig::validate() const {
    const auto &dims = code.ambient_dims();
    if (king_slot < 1 || king_slot > dims.size()) {
        throw InvalidInput("king slot out of range for the code's parties");
    }
    const std::size_t slot_dim = dims[king_slot - 1];
    if (families.empty()) {
        throw InvalidInput("no measurement families");
    }
    for (const auto &f : families) {
        f.validate();
        if (f.dim() != slot_dim) {
            throw InvalidInput("measurement operators do not fit the king's party");
        }
    }
    err.validate();
    if (err.dim() != slot_dim) {
        throw InvalidInput("error operators do not fit the king's party");
    }
    if (index_sets.max_index() > static_cast<int>(err.size())) {
        throw InvalidInput("index sets mention error indices beyond the error model");
    }
}

std::optional<int> guess(int k, int family, const IndexSets &sets) {
    return sets.owner(family, k);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// Stream domains keep initial-state draws and Monte Carlo trials apart.
constexpr std::uint64_t kInitialStateDomain = 0x1ULL << 62U;
constexpr std::uint64_t kTrialDomain = 0x2ULL << 62U;

StateVector random_code_state(const QuantumCode &code, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> coeffs(code.dimension());
    for (auto &c : coeffs) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        c = Complex{re, im};
    }
    return code.superpose(coeffs).normalized();
}

struct Game {
    DiscriminationPvm pvm;
    std::vector<std::vector<ComplexMatrix>> lifted; // [family][outcome]
};

Game prepare(const GameConfig &cfg, const Tolerance &tol) {
    cfg.validate();
    const auto &dims = cfg.code.ambient_dims();
    Game g;
    g.pvm = discrimination_pvm(cfg.code, embed_errors(cfg.err, cfg.king_slot, dims), tol);
    for (const auto &f : cfg.families) {
        std::vector<ComplexMatrix> ops;
        for (const auto &m : f.ops) {
            ops.push_back(embed_on_slot(m, cfg.king_slot, dims));
        }
        g.lifted.push_back(std::move(ops));
    }
    return g;
}

/// Probabilities of every discrimination outcome followed by the residual.
std::vector<double> alice_distribution(const DiscriminationPvm &pvm, const StateVector &post) {
    std::vector<double> q;
    q.reserve(pvm.bases.size() + 1);
    for (const auto &basis : pvm.bases) {
        double s = 0.0;
        for (const auto &v : basis) {
            s += std::norm(inner(v, post));
        }
        q.push_back(s);
    }
    q.push_back(std::max(0.0, inner(post, apply(pvm.residual, post)).real()));
    return q;
}

std::size_t sample(const std::vector<double> &probs, std::mt19937_64 &rng) {
    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    std::uniform_real_distribution<double> unif(0.0, total);
    const double u = unif(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return i;
        }
    }
    // round-off at the top end: last outcome with positive weight
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
            return i;
        }
    }
    return probs.size() - 1;
}

} // namespace

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ stream));
}

std::vector<StateVector> initial_states(const GameConfig &cfg) {
    std::vector<StateVector> states = cfg.code.basis();
    for (std::size_t r = 0; r < cfg.n_random_states; ++r) {
        auto rng = stream_rng(cfg.rng_seed, kInitialStateDomain | r);
        states.push_back(random_code_state(cfg.code, rng));
    }
    return states;
}

ExhaustiveReport run_exhaustive(const GameConfig &cfg, const Tolerance &tol, Exec exec) {
    const Game game = prepare(cfg, tol);
    const double zero_prob = tol.eps_ortho * tol.eps_ortho;

    ExhaustiveReport report;
    report.initial_states = initial_states(cfg);

    struct TaskResult {
        std::vector<BranchSummary> branches;
        std::vector<Transcript> transcripts;
        std::vector<std::string> failures;
        double king_sum = 0.0;
    };
    const std::size_t nf = cfg.families.size();
    std::vector<TaskResult> results(report.initial_states.size() * nf);

    auto run = [&](std::size_t task) {
        const std::size_t s = task / nf;
        const std::size_t f = task % nf;
        const StateVector &psi = report.initial_states[s];
        const int label = cfg.families[f].label;
        TaskResult &out = results[task];
        for (std::size_t i = 0; i < game.lifted[f].size(); ++i) {
            const int outcome = static_cast<int>(i + 1);
            const BornOutcome b = born(game.lifted[f][i], psi, tol);
            out.king_sum += b.probability;
            if (!b.post) {
                continue;
            }
            const std::vector<double> q = alice_distribution(game.pvm, *b.post);
            BranchSummary br{s, label, outcome, b.probability};
            const auto set_it = cfg.index_sets.sets().find({label, outcome});
            for (std::size_t a = 0; a < q.size(); ++a) {
                br.alice_total += q[a];
                const bool residual = a + 1 == q.size();
                std::optional<int> k;
                if (!residual) {
                    k = game.pvm.error_index[a];
                }
                const bool in_set =
                    k && set_it != cfg.index_sets.sets().end() &&
                    std::binary_search(set_it->second.begin(), set_it->second.end(), *k);
                if (in_set) {
                    br.containment += q[a];
                }
                if (q[a] <= zero_prob) {
                    continue;
                }
                Transcript t;
                t.initial = s;
                t.family = label;
                t.king_outcome = outcome;
                t.king_prob = b.probability;
                t.alice_outcome = k;
                t.alice_prob = q[a];
                if (k) {
                    t.guess = guess(*k, label, cfg.index_sets);
                }
                t.success = t.guess && *t.guess == outcome;
                if (t.success) {
                    br.success_prob += q[a];
                }
                out.transcripts.push_back(t);

                if (residual) {
                    std::ostringstream os;
                    os << "state " << s << ", J=" << label << ", i=" << outcome
                       << ": residual outcome occurs with probability " << q[a];
                    out.failures.push_back(os.str());
                } else if (!in_set) {
                    std::ostringstream os;
                    os << "state " << s << ", J=" << label << ", i=" << outcome
                       << ": Alice outcome k=" << *k << " lies outside X^(" << label << ","
                       << outcome << ") (probability " << q[a] << ")";
                    out.failures.push_back(os.str());
                }
            }
            out.branches.push_back(br);
        }
    };

    const auto n = static_cast<std::ptrdiff_t>(results.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(static_cast<std::size_t>(t));
        }
    } else {
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(static_cast<std::size_t>(t));
        }
    }

    for (auto &r : results) {
        report.max_king_sum_dev = std::max(report.max_king_sum_dev, std::abs(r.king_sum - 1.0));
        for (const auto &br : r.branches) {
            report.min_success = std::min(report.min_success, br.success_prob);
            report.max_success = std::max(report.max_success, br.success_prob);
            report.max_alice_sum_dev =
                std::max(report.max_alice_sum_dev, std::abs(br.alice_total - 1.0));
        }
        std::move(r.branches.begin(), r.branches.end(), std::back_inserter(report.branches));
        std::move(r.transcripts.begin(), r.transcripts.end(),
                  std::back_inserter(report.transcripts));
        std::move(r.failures.begin(), r.failures.end(), std::back_inserter(report.failures));
    }
    if (report.branches.empty()) {
        report.min_success = 0.0;
        report.failures.emplace_back("no king outcome has positive probability");
    }
    return report;
}

MonteCarloReport run_montecarlo(const GameConfig &cfg, std::size_t trials, const Tolerance &tol,
                                Exec exec) {
    const Game game = prepare(cfg, tol);
    const std::size_t nf = cfg.families.size();
    MonteCarloReport report;
    report.trials = trials;
    report.family_trials.assign(nf, 0);
    report.family_successes.assign(nf, 0);
    if (trials == 0) {
        return report;
    }

    struct Outcome {
        std::size_t family = 0;
        bool success = false;
    };
    std::vector<Outcome> outcomes(trials);

    auto run = [&](std::size_t t) {
        auto rng = stream_rng(cfg.rng_seed, kTrialDomain | t);
        const StateVector psi = random_code_state(cfg.code, rng);
        std::uniform_int_distribution<std::size_t> pick(0, nf - 1);
        const std::size_t f = pick(rng);

        std::vector<double> king;
        std::vector<std::optional<StateVector>> posts;
        for (const auto &m : game.lifted[f]) {
            BornOutcome b = born(m, psi, tol);
            king.push_back(b.post ? b.probability : 0.0);
            posts.push_back(std::move(b.post));
        }
        const std::size_t i = sample(king, rng);
        const std::vector<double> q = alice_distribution(game.pvm, *posts[i]);
        const std::size_t a = sample(q, rng);
        std::optional<int> g;
        if (a < game.pvm.error_index.size()) {
            g = guess(game.pvm.error_index[a], cfg.families[f].label, cfg.index_sets);
        }
        outcomes[t] = Outcome{f, g && *g == static_cast<int>(i + 1)};
    };

    const auto n = static_cast<std::ptrdiff_t>(trials);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(static_cast<std::size_t>(t));
        }
    } else {
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            run(static_cast<std::size_t>(t));
        }
    }

    for (const auto &o : outcomes) {
        ++report.family_trials[o.family];
        if (o.success) {
            ++report.family_successes[o.family];
            ++report.successes;
        }
    }
    report.rate = static_cast<double>(report.successes) / static_cast<double>(trials);
    return report;
}

} // namespace kingcode
