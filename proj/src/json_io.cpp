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

#include "kingcode/json_io.hpp"

#include <fstream>
#include <sstream>

#include "kingcode/errors.hpp"

namespace kingcode::io {

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidInput("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const json &field(const json &j, const char *name) {
    if (!j.is_object() || !j.contains(name)) {
        throw InvalidInput(std::string("missing field \"") + name + "\"");
    }
    return j.at(name);
}

template <typename F> auto guarded(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw InvalidInput(std::string("malformed JSON document: ") + e.what());
    }
}

std::pair<int, int> parse_pair(const std::string &key) {
    int a = 0;
    int b = 0;
    char comma = 0;
    std::istringstream is(key);
    if (!(is >> a >> comma >> b) || comma != ',' || !is.eof()) {
        throw InvalidInput("index set key must look like \"J,i\": " + key);
    }
    return {a, b};
}

std::tuple<int, int, int> parse_triple(const std::string &key) {
    int a = 0;
    int b = 0;
    int c = 0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream is(key);
    if (!(is >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',' || !is.eof()) {
        throw InvalidInput("coefficient key must look like \"J,i,k\": " + key);
    }
    return {a, b, c};
}

template <typename T, typename F> json array_of(const std::vector<T> &xs, F &&enc) {
    json a = json::array();
    for (const auto &x : xs) {
        a.push_back(enc(x));
    }
    return a;
}

std::vector<StateVector> vectors_from_json(const json &j) {
    if (!j.is_array()) {
        throw InvalidInput("expected an array of vectors");
    }
    std::vector<StateVector> out;
    for (const auto &v : j) {
        out.push_back(vector_from_json(v));
    }
    return out;
}

json vectors_to_json(const std::vector<StateVector> &vs) {
    return array_of(vs, [](const StateVector &v) { return to_json(v); });
}

} // namespace

json to_json(const ComplexMatrix &m) {
    json data = json::array();
    for (const auto &z : m.data()) {
        data.push_back(complex_to_json(z));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const StateVector &v) {
    json data = json::array();
    for (const auto &z : v.amplitudes()) {
        data.push_back(complex_to_json(z));
    }
    return {{"rows", v.dim()}, {"cols", 1}, {"data", std::move(data)},
            {"factor_dims", v.factor_dims()}};
}

json to_json(const MeasurementFamily &f) {
    return {{"J", f.label}, {"ops", array_of(f.ops, [](const auto &m) { return to_json(m); })}};
}

json to_json(const ErrorModel &e) {
    return {{"kraus", array_of(e.kraus, [](const auto &m) { return to_json(m); })}};
}

json to_json(const IndexSets &s) {
    json sets = json::object();
    for (const auto &[key, ks] : s.sets()) {
        sets[std::to_string(key.first) + "," + std::to_string(key.second)] = ks;
    }
    json coeffs = json::object();
    for (const auto &[key, c] : s.coeffs()) {
        coeffs[std::to_string(key.first.first) + "," + std::to_string(key.first.second) + "," +
               std::to_string(key.second)] = complex_to_json(c);
    }
    return {{"sets", std::move(sets)}, {"coeffs", std::move(coeffs)}};
}

json to_json(const SolutionPair &s) {
    return {{"eta", s.state().eta()},
            {"basis_a", vectors_to_json(s.state().basis_a())},
            {"basis_k", vectors_to_json(s.state().basis_k())},
            {"pvm", vectors_to_json(s.pvm_basis())}};
}

json to_json(const QuantumCode &c) {
    return {{"ambient_dims", c.ambient_dims()}, {"basis", vectors_to_json(c.basis())}};
}

json to_json(const GhzTuple &t) { return t.indices; }

json to_json(const GramReport &r) {
    return {{"gram", to_json(r.gram)},
            {"alpha", r.alpha},
            {"max_offdiag", r.max_offdiag},
            {"diag_spread", r.diag_spread},
            {"pass", r.pass}};
}

json to_json(const KLReport &r) {
    return {{"alpha_matrix", to_json(r.alpha_matrix)},
            {"diagonal", r.diagonal},
            {"lambdas", r.lambdas},
            {"max_residual", r.max_residual},
            {"psd_defect", r.psd_defect},
            {"pass", r.pass}};
}

json to_json(const SolutionVerdict &v) {
    json guess_map = json::array();
    for (const auto &[key, i] : v.guess_map) {
        guess_map.push_back({{"J", key.first}, {"k", key.second}, {"i", i}});
    }
    json conflicts = json::array();
    for (const auto &[fam, k] : v.conflicts) {
        conflicts.push_back({{"J", fam}, {"k", k}});
    }
    return {{"verdict", v.is_solution ? "solution" : "not_a_solution"},
            {"guess_map", std::move(guess_map)},
            {"conflicts", std::move(conflicts)},
            {"min_success_probability", v.min_success_probability},
            {"residuals",
             {{"king_probability", v.king_probability_residual},
              {"alice_probability", v.alice_probability_residual}}}};
}

json to_json(const ExhaustiveReport &r) {
    json branches = json::array();
    for (const auto &b : r.branches) {
        branches.push_back({{"initial", b.initial},
                            {"J", b.family},
                            {"i", b.king_outcome},
                            {"king_prob", b.king_prob},
                            {"success_prob", b.success_prob},
                            {"alice_total", b.alice_total},
                            {"containment", b.containment}});
    }
    json transcripts = json::array();
    for (const auto &t : r.transcripts) {
        transcripts.push_back({{"initial", t.initial},
                               {"J", t.family},
                               {"i", t.king_outcome},
                               {"king_prob", t.king_prob},
                               {"k", t.alice_outcome ? json(*t.alice_outcome) : json("residual")},
                               {"alice_prob", t.alice_prob},
                               {"guess", t.guess ? json(*t.guess) : json("abstain")},
                               {"success", t.success}});
    }
    return {{"min_success", r.min_success},
            {"max_success", r.max_success},
            {"initial_states", r.initial_states.size()},
            {"branches", std::move(branches)},
            {"transcripts", std::move(transcripts)},
            {"failures", r.failures},
            {"max_king_sum_dev", r.max_king_sum_dev},
            {"max_alice_sum_dev", r.max_alice_sum_dev}};
}

json to_json(const MonteCarloReport &r) {
    return {{"trials", r.trials},
            {"successes", r.successes},
            {"rate", r.rate ? json(*r.rate) : json(nullptr)},
            {"family_trials", r.family_trials},
            {"family_successes", r.family_successes}};
}

ComplexMatrix matrix_from_json(const json &j) {
    return guarded([&] {
        const auto rows = field(j, "rows").get<std::size_t>();
        const auto cols = field(j, "cols").get<std::size_t>();
        const json &data = field(j, "data");
        if (!data.is_array()) {
            throw InvalidInput("matrix data must be an array");
        }
        std::vector<Complex> entries;
        entries.reserve(data.size());
        for (const auto &z : data) {
            entries.push_back(complex_from_json(z));
        }
        return ComplexMatrix(rows, cols, std::move(entries));
    });
}

StateVector vector_from_json(const json &j) {
    return guarded([&] {
        const ComplexMatrix m = matrix_from_json(j);
        if (m.cols() != 1) {
            throw InvalidInput("vector must have cols = 1");
        }
        std::vector<Complex> amps(m.data().begin(), m.data().end());
        if (j.contains("factor_dims")) {
            return StateVector(std::move(amps), j.at("factor_dims").get<std::vector<std::size_t>>());
        }
        return StateVector(std::move(amps));
    });
}

MeasurementFamily family_from_json(const json &j) {
    return guarded([&] {
        MeasurementFamily f;
        f.label = field(j, "J").get<int>();
        const json &ops = field(j, "ops");
        if (!ops.is_array()) {
            throw InvalidInput("family ops must be an array");
        }
        for (const auto &m : ops) {
            f.ops.push_back(matrix_from_json(m));
        }
        f.validate();
        return f;
    });
}

std::vector<MeasurementFamily> families_from_json(const json &j) {
    if (j.is_object()) {
        if (j.contains("families")) {
            return families_from_json(j.at("families"));
        }
        return {family_from_json(j)};
    }
    if (!j.is_array()) {
        throw InvalidInput("expected a measurement family or an array of them");
    }
    std::vector<MeasurementFamily> out;
    for (const auto &f : j) {
        out.push_back(family_from_json(f));
    }
    return out;
}

ErrorModel error_model_from_json(const json &j) {
    return guarded([&] {
        ErrorModel e;
        const json &kraus = field(j, "kraus");
        if (!kraus.is_array()) {
            throw InvalidInput("kraus must be an array");
        }
        for (const auto &m : kraus) {
            e.kraus.push_back(matrix_from_json(m));
        }
        e.validate();
        return e;
    });
}

IndexSets index_sets_from_json(const json &j) {
    return guarded([&] {
        std::map<OutcomeKey, std::vector<int>> sets;
        for (const auto &[key, ks] : field(j, "sets").items()) {
            sets[parse_pair(key)] = ks.get<std::vector<int>>();
        }
        std::map<std::pair<OutcomeKey, int>, Complex> coeffs;
        for (const auto &[key, c] : field(j, "coeffs").items()) {
            const auto [fam, outcome, k] = parse_triple(key);
            coeffs[{{fam, outcome}, k}] = complex_from_json(c);
        }
        return IndexSets(std::move(sets), std::move(coeffs));
    });
}

SolutionPair solution_from_json(const json &j, const Tolerance &tol) {
    return guarded([&] {
        SchmidtState state(field(j, "eta").get<std::vector<double>>(),
                           vectors_from_json(field(j, "basis_a")),
                           vectors_from_json(field(j, "basis_k")), tol);
        return SolutionPair(std::move(state), vectors_from_json(field(j, "pvm")), tol);
    });
}

QuantumCode code_from_json(const json &j, const Tolerance &tol) {
    return guarded([&] {
        return QuantumCode(field(j, "ambient_dims").get<std::vector<std::size_t>>(),
                           vectors_from_json(field(j, "basis")), tol);
    });
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

} // namespace kingcode::io
