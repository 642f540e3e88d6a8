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

#include "kingcode/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "kingcode/code_builder.hpp"
#include "kingcode/errors.hpp"
#include "kingcode/json_io.hpp"
#include "kingcode/protocol.hpp"
#include "kingcode/solution_engine.hpp"

namespace kingcode::cli {

using io::json;

namespace {

struct CommonOptions {
    std::optional<double> tol;
    std::optional<double> eps_ortho;
    std::optional<double> eps_psd;
    std::string format = "json";
};

Tolerance resolve_tolerance(const CommonOptions &o) {
    Tolerance t;
    if (const char *env = std::getenv("KINGCODE_TOL"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') {
            throw InvalidInput(std::string("KINGCODE_TOL is not a number: ") + env);
        }
        t.eps_eq = v;
    }
    if (o.tol) {
        t.eps_eq = *o.tol;
    }
    if (o.eps_ortho) {
        t.eps_ortho = *o.eps_ortho;
    }
    if (o.eps_psd) {
        t.eps_psd = *o.eps_psd;
    }
    t.validate();
    return t;
}

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("--tol", o.tol, "Equality tolerance eps_eq (also KINGCODE_TOL)");
    cmd->add_option("--eps-ortho", o.eps_ortho, "Zero bound for inner products");
    cmd->add_option("--eps-psd", o.eps_psd, "Allowed negative eigenvalue magnitude");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));
}

void emit(std::ostream &out, const CommonOptions &o, const json &report,
          const std::function<void(std::ostream &)> &text) {
    if (o.format == "text") {
        text(out);
    } else {
        out << report.dump(2) << '\n';
    }
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// ---------------------------------------------------------------- verify-example

struct Check {
    std::string name;
    double value = 0.0;
    bool pass = false;
    std::string detail;
};

int cmd_verify_example(const CommonOptions &o, bool inject_fault, std::ostream &out) {
    const Tolerance tol = resolve_tolerance(o);
    ErrorModel err = qubit_example_errors();
    if (inject_fault) {
        err.kraus[0](0, 0) += 1e-3;
    }
    const auto families = qubit_king_measurements();
    const IndexSets table = qubit_example_index_sets();
    const SchmidtState bell = SchmidtState::maximally_entangled(2);

    std::vector<Check> checks;
    auto run_check = [&](const std::string &name, const std::function<Check()> &f) {
        try {
            Check c = f();
            c.name = name;
            checks.push_back(std::move(c));
        } catch (const Error &e) {
            checks.push_back(Check{name, NAN, false, e.what()});
        }
    };

    run_check("completeness", [&] {
        const double dev = distance(err.completeness(), ComplexMatrix::identity(2));
        return Check{"", dev, dev <= tol.eps_eq, "||sum L^dagger L - I||_F"};
    });
    run_check("decomposition", [&] {
        double worst = 0.0;
        for (const auto &fam : families) {
            for (std::size_t i = 0; i < fam.ops.size(); ++i) {
                ComplexMatrix sum(2, 2);
                for (int k : table.at(fam.label, static_cast<int>(i + 1))) {
                    sum += err.kraus[static_cast<std::size_t>(k - 1)];
                }
                worst = std::max(worst, (fam.ops[i] - sum).max_abs());
            }
        }
        return Check{"", worst, worst <= tol.eps_eq, "max entrywise |M_i^(J) - sum L_k|"};
    });
    run_check("index_sets", [&] {
        const auto derived = derive_index_sets(bell, err, families, tol);
        bool same = derived.sets.sets() == table.sets();
        double coeff_dev = 0.0;
        for (const auto &[key, c] : derived.sets.coeffs()) {
            coeff_dev = std::max(coeff_dev, std::abs(c - Complex{1.0}));
        }
        same = same && coeff_dev <= tol.eps_eq;
        return Check{"", coeff_dev, same, "derived X^(J,i) equal the table, max |f - 1|"};
    });
    run_check("gram", [&] {
        const GramReport g = gram_check(bell, err, tol);
        const double dev = (g.gram - 0.25 * ComplexMatrix::identity(err.size())).max_abs();
        return Check{"", dev, dev <= tol.eps_eq && g.pass, "max |G - I/4|"};
    });
    run_check("kl_bell_code", [&] {
        const QuantumCode code({2, 2}, {bell.assemble()}, tol);
        const KLReport kl = kl_check(code, embed_errors(err, 2, {2, 2}), true, tol);
        double dev = 0.0;
        for (double lam : kl.lambdas) {
            dev = std::max(dev, std::abs(lam - 0.25));
        }
        return Check{"", std::max(dev, kl.max_residual), kl.pass && dev <= tol.eps_eq,
                     "(4,1) code diagonal with lambda_k = 1/4"};
    });
    double min_success = NAN;
    run_check("protocol_bell_code", [&] {
        GameConfig cfg{QuantumCode({2, 2}, {bell.assemble()}, tol), families, err, table, 2};
        const ExhaustiveReport r = run_exhaustive(cfg, tol);
        min_success = r.min_success;
        return Check{"", r.min_success,
                     r.failures.empty() && r.min_success >= 1.0 - tol.eps_eq,
                     "exhaustive min success probability"};
    });
    run_check("solution_verdict", [&] {
        const StateVector psi = bell.assemble();
        std::vector<StateVector> pvm;
        for (const auto &l : err.kraus) {
            pvm.push_back(2.0 * apply(embed_on_slot(l, 2, {2, 2}), psi));
        }
        const SolutionVerdict v = verify_solution(SolutionPair(bell, pvm, tol), families, tol);
        return Check{"", v.min_success_probability, v.is_solution,
                     "Bell state with the error-image basis solves the game"};
    });

    bool all = true;
    json jchecks = json::array();
    for (const auto &c : checks) {
        all = all && c.pass;
        jchecks.push_back({{"name", c.name},
                           {"value", std::isnan(c.value) ? json(nullptr) : json(c.value)},
                           {"pass", c.pass},
                           {"detail", c.detail}});
    }
    json report{{"checks", jchecks},
                {"pass", all},
                {"min_success", std::isnan(min_success) ? json(nullptr) : json(min_success)},
                {"index_sets", io::to_json(table)},
                {"tolerance", {{"eps_eq", tol.eps_eq}, {"eps_ortho", tol.eps_ortho},
                               {"eps_psd", tol.eps_psd}}}};
    emit(out, o, report, [&](std::ostream &os) {
        os << index_set_table(table) << '\n';
        for (const auto &c : checks) {
            os << (c.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(20) << c.name
               << fmt_double(c.value) << "  " << c.detail << '\n';
        }
        os << (all ? "all checks passed" : "some checks FAILED") << '\n';
    });
    return all ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------- build-bipartite

struct BipartiteOptions {
    std::size_t dim_a = 2;
    std::string eta_file;
    std::string model_file;
    std::string out;
    std::string report;
};

SchmidtState schmidt_from_eta_file(const std::string &path, const Tolerance &tol) {
    const json j = io::read_json_file(path);
    try {
        const json &eta_j = j.is_array() ? j : j.at("eta");
        const auto eta = eta_j.get<std::vector<double>>();
        std::vector<StateVector> comp;
        for (std::size_t i = 0; i < eta.size(); ++i) {
            comp.push_back(StateVector::basis(eta.size(), i));
        }
        std::vector<StateVector> phi = comp;
        if (j.is_object() && j.contains("basis_k")) {
            phi.clear();
            for (const auto &v : j.at("basis_k")) {
                phi.push_back(io::vector_from_json(v));
            }
        }
        return SchmidtState(eta, comp, phi, tol);
    } catch (const json::exception &e) {
        throw InvalidInput(path + ": malformed eta file: " + e.what());
    }
}

json discrimination_summary(const DiscriminationPvm &pvm) {
    json ranks = json::array();
    for (const auto &b : pvm.bases) {
        ranks.push_back(b.size());
    }
    return {{"error_index", pvm.error_index}, {"ranks", ranks},
            {"residual_rank", pvm.residual_rank}};
}

void write_report(const std::string &path, const json &report) {
    if (!path.empty()) {
        io::write_json_file(path, report);
    }
}

int cmd_build_bipartite(const CommonOptions &o, const BipartiteOptions &b, std::ostream &out) {
    const Tolerance tol = resolve_tolerance(o);
    const SchmidtState state = b.eta_file.empty() ? SchmidtState::maximally_entangled(2)
                                                  : schmidt_from_eta_file(b.eta_file, tol);
    const ErrorModel err = b.model_file.empty()
                               ? qubit_example_errors()
                               : io::error_model_from_json(io::read_json_file(b.model_file));
    if (err.dim() != state.d()) {
        throw InvalidInput("error model dimension does not match the Schmidt state");
    }
    const QuantumCode code = build_bipartite_code(state, b.dim_a, tol);
    const auto lifted = embed_errors(err, 2, code.ambient_dims());
    const KLReport kl = kl_check(code, lifted, true, tol);
    json disc = nullptr;
    if (kl.pass) {
        disc = discrimination_summary(discrimination_pvm(code, lifted, tol));
    }
    if (!b.out.empty()) {
        io::write_json_file(b.out, io::to_json(code));
    }
    json report{{"ambient_dims", code.ambient_dims()},
                {"code_dimension", code.dimension()},
                {"kl", io::to_json(kl)},
                {"discrimination", disc},
                {"pass", kl.pass}};
    write_report(b.report, report);
    emit(out, o, report, [&](std::ostream &os) {
        os << "(" << code.ambient_dim() << "," << code.dimension() << ") bipartite code\n"
           << "KL diagonal: " << (kl.diagonal ? "yes" : "no")
           << "  max residual: " << fmt_double(kl.max_residual) << '\n'
           << "lambdas:";
        for (double l : kl.lambdas) {
            os << ' ' << fmt_double(l);
        }
        os << '\n';
        if (!disc.is_null()) {
            os << "residual PVM rank: " << disc["residual_rank"] << '\n';
        }
        os << (kl.pass ? "PASS" : "FAIL") << '\n';
    });
    return kl.pass ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------- build-ghz

struct GhzOptions {
    std::size_t n = 3;
    std::size_t slot = 1;
    std::string mode = "greedy";
    std::string out;
    std::string report;
};

int cmd_build_ghz(const CommonOptions &o, const GhzOptions &g, std::ostream &out) {
    const Tolerance tol = resolve_tolerance(o);
    if (g.n < 3) {
        throw InvalidInput("--n must be at least 3: for n = 2 no two positions besides the "
                           "king's slot exist, so no pair of GHZ states is separated");
    }
    const SchmidtState ref = SchmidtState::maximally_entangled(2);
    const SelectionMode mode = g.mode == "exact" ? SelectionMode::exact : SelectionMode::greedy;
    const MultipartiteCode mc = build_multipartite_code(ref.eta(), ref.basis_k(), g.n, g.slot,
                                                        qubit_example_errors(), mode, tol);
    const auto lifted = embed_errors(qubit_example_errors(), g.slot, mc.code.ambient_dims());
    const KLReport kl = kl_check(mc.code, lifted, true, tol);
    if (!g.out.empty()) {
        io::write_json_file(g.out, io::to_json(mc.code));
    }
    json tuples = json::array();
    for (const auto &t : mc.tuples) {
        tuples.push_back(io::to_json(t));
    }
    json report{{"n", g.n},
                {"slot", g.slot},
                {"mode", g.mode},
                {"g", mc.tuples.size()},
                {"candidates", mc.candidates},
                {"tuples", tuples},
                {"kl", io::to_json(kl)},
                {"pass", kl.pass}};
    write_report(g.report, report);
    emit(out, o, report, [&](std::ostream &os) {
        os << "(" << mc.code.ambient_dim() << "," << mc.tuples.size() << ") GHZ code, slot "
           << g.slot << ", " << g.mode << " selection from " << mc.candidates
           << " distinct states\n";
        for (const auto &t : mc.tuples) {
            os << "  (";
            for (std::size_t u = 0; u < t.size(); ++u) {
                os << (u ? "," : "") << t.indices[u];
            }
            os << ")\n";
        }
        os << "KL diagonal: " << (kl.diagonal ? "yes" : "no") << "  "
           << (kl.pass ? "PASS" : "FAIL") << '\n';
    });
    return kl.pass ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string code;
    std::optional<std::size_t> slot;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t n_random = 20;
    std::string measurements_file;
    std::string model_file;
    std::string index_sets_file;
    std::string out;
};

int cmd_simulate(const CommonOptions &o, const SimulateOptions &s, std::ostream &out) {
    const Tolerance tol = resolve_tolerance(o);
    QuantumCode code = io::code_from_json(io::read_json_file(s.code), tol);
    const std::size_t slot = s.slot.value_or(code.ambient_dims().size());
    auto families = s.measurements_file.empty()
                        ? qubit_king_measurements()
                        : io::families_from_json(io::read_json_file(s.measurements_file));
    ErrorModel err = s.model_file.empty()
                         ? qubit_example_errors()
                         : io::error_model_from_json(io::read_json_file(s.model_file));
    IndexSets sets = qubit_example_index_sets();
    if (!s.index_sets_file.empty()) {
        const json j = io::read_json_file(s.index_sets_file);
        sets = io::index_sets_from_json(j.contains("index_sets") ? j.at("index_sets") : j);
    }
    GameConfig cfg{std::move(code), std::move(families), std::move(err), std::move(sets), slot,
                   s.seed, s.n_random};

    json report;
    double min_success = 0.0;
    bool ok = false;
    try {
        const ExhaustiveReport ex = run_exhaustive(cfg, tol);
        report = io::to_json(ex);
        min_success = ex.min_success;
        ok = ex.failures.empty() && ex.min_success >= 1.0 - tol.eps_eq;
        if (s.trials > 0) {
            report["montecarlo"] = io::to_json(run_montecarlo(cfg, s.trials, tol));
        }
    } catch (const VerificationFailure &e) {
        report = {{"min_success", nullptr}, {"failures", json::array({e.what()})}};
    }
    report["seed"] = s.seed;
    report["slot"] = slot;
    report["pass"] = ok;
    if (!s.out.empty()) {
        io::write_json_file(s.out, report);
    }
    emit(out, o, report, [&](std::ostream &os) {
        os << "slot " << slot << ", " << report.value("initial_states", 0) << " initial states\n"
           << "min_success " << fmt_double(min_success) << '\n';
        for (const auto &f : report["failures"]) {
            os << "  failure: " << f.get<std::string>() << '\n';
        }
        if (report.contains("montecarlo") && !report["montecarlo"]["rate"].is_null()) {
            os << "monte carlo rate " << fmt_double(report["montecarlo"]["rate"].get<double>())
               << " over " << s.trials << " trials\n";
        }
        os << (ok ? "PASS" : "FAIL") << '\n';
    });
    return ok ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------- derive

struct DeriveOptions {
    std::string solution_file;
    std::string measurements_file;
    std::string out;
};

int cmd_derive(const CommonOptions &o, const DeriveOptions &d, std::ostream &out) {
    const Tolerance tol = resolve_tolerance(o);
    const SolutionPair sol = io::solution_from_json(io::read_json_file(d.solution_file), tol);
    const auto families = io::families_from_json(io::read_json_file(d.measurements_file));

    const ErrorModel err = derive_error_operators(sol, tol);
    const GramReport gram = gram_check(sol.state(), err, tol);
    json report = io::to_json(err);
    report["gram"] = io::to_json(gram);
    report["verification"] = io::to_json(verify_solution(sol, families, tol));
    try {
        const IndexSetDerivation derived = derive_index_sets(sol.state(), err, families, tol);
        report["index_sets"] = io::to_json(derived.sets);
        json res = json::object();
        for (const auto &[key, r] : derived.residuals) {
            res[std::to_string(key.first) + "," + std::to_string(key.second)] = r;
        }
        report["residuals"] = res;
        report["pass"] = true;
        if (!d.out.empty()) {
            io::write_json_file(d.out, report);
        }
        emit(out, o, report, [&](std::ostream &os) {
            os << "derived " << err.size() << " error operators, alpha = "
               << fmt_double(gram.alpha) << '\n'
               << index_set_table(derived.sets) << '\n';
        });
        return kSuccess;
    } catch (const DecompositionError &e) {
        report["pass"] = false;
        report["failure"] = {{"J", e.family()}, {"i", e.outcome()}, {"residual", e.residual()},
                             {"message", e.what()}};
        if (!d.out.empty()) {
            io::write_json_file(d.out, report);
        }
        emit(out, o, report, [&](std::ostream &os) {
            os << "not decomposable at (J,i) = (" << e.family() << "," << e.outcome()
               << "): " << e.what() << '\n';
        });
        return kVerificationFailure;
    }
}

// ---------------------------------------------------------------- export-example

int cmd_export_example(const std::string &dir, std::ostream &out) {
    const std::string base = dir.empty() ? std::string(".") : dir;
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    if (ec) {
        throw InvalidInput("cannot create directory " + base + ": " + ec.message());
    }
    io::write_json_file(base + "/solution.json", io::to_json(qubit_example_solution()));
    json fams = json::array();
    for (const auto &f : qubit_king_measurements()) {
        fams.push_back(io::to_json(f));
    }
    io::write_json_file(base + "/measurements.json", fams);
    io::write_json_file(base + "/errors.json", io::to_json(qubit_example_errors()));
    io::write_json_file(base + "/index_sets.json", io::to_json(qubit_example_index_sets()));
    out << "wrote solution.json, measurements.json, errors.json, index_sets.json to " << base
        << '\n';
    return kSuccess;
}

} // namespace

std::string index_set_table(const IndexSets &sets) {
    std::map<int, std::vector<std::pair<int, std::string>>> by_family;
    for (const auto &[key, ks] : sets.sets()) {
        std::string s = "{";
        for (std::size_t u = 0; u < ks.size(); ++u) {
            s += (u ? "," : "") + std::to_string(ks[u]);
        }
        s += "}";
        by_family[key.first].emplace_back(key.second, s);
    }
    std::size_t rows = 0;
    for (const auto &[f, entries] : by_family) {
        rows = std::max(rows, entries.size());
    }
    std::ostringstream os;
    bool first = true;
    for (std::size_t g = 0; g < by_family.size(); ++g) {
        os << (first ? "" : " | ") << std::left << std::setw(3) << "J" << std::setw(3) << "i"
           << std::setw(12) << "X^(J,i)";
        first = false;
    }
    os << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        first = true;
        for (const auto &[f, entries] : by_family) {
            os << (first ? "" : " | ");
            first = false;
            if (r < entries.size()) {
                os << std::left << std::setw(3) << f << std::setw(3) << entries[r].first
                   << std::setw(12) << entries[r].second;
            } else {
                os << std::string(18, ' ');
            }
        }
        os << '\n';
    }
    return os.str();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum codes from mean king solutions: construction, checks, simulation"};
    app.name("kingcode");
    app.require_subcommand(1);

    CommonOptions common;

    bool inject_fault = false;
    auto *verify = app.add_subcommand("verify-example", "Check the built-in qubit example");
    add_common(verify, common);
    verify->add_flag("--inject-fault", inject_fault, "Perturb L_1 before checking (test hook)")
        ->group("");

    BipartiteOptions bip;
    auto *bipartite = app.add_subcommand("build-bipartite", "Build a (dA*d, floor(dA/d)) code");
    add_common(bipartite, common);
    bipartite->add_option("--dA", bip.dim_a, "Dimension of Alice's party")->required();
    bipartite->add_option("--eta-file", bip.eta_file, "JSON with \"eta\" (and optional basis_k)");
    bipartite->add_option("--model-file", bip.model_file, "Error model JSON");
    bipartite->add_option("--out", bip.out, "Write the code JSON here");
    bipartite->add_option("--report", bip.report, "Also write the report JSON here");

    GhzOptions ghz;
    auto *ghz_cmd = app.add_subcommand("build-ghz", "Build a qubit GHZ code on n parties");
    add_common(ghz_cmd, common);
    ghz_cmd->add_option("--n", ghz.n, "Number of parties")->required();
    ghz_cmd->add_option("--slot", ghz.slot, "Party handed to the king (1-based)");
    ghz_cmd->add_option("--mode", ghz.mode, "Selection mode")
        ->check(CLI::IsMember({"greedy", "exact"}));
    ghz_cmd->add_option("--out", ghz.out, "Write the code JSON here");
    ghz_cmd->add_option("--report", ghz.report, "Also write the report JSON here");

    SimulateOptions sim;
    auto *simulate = app.add_subcommand("simulate", "Play the game exhaustively on a code");
    add_common(simulate, common);
    simulate->add_option("--code", sim.code, "Code JSON")->required();
    simulate->add_option("--slot", sim.slot, "Party handed to the king (default: last)");
    simulate->add_option("--trials", sim.trials, "Monte Carlo trials (0 = none)");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--n-random", sim.n_random, "Random code states besides the basis");
    simulate->add_option("--measurements-file", sim.measurements_file, "King's families JSON");
    simulate->add_option("--model-file", sim.model_file, "Error model JSON");
    simulate->add_option("--index-sets-file", sim.index_sets_file, "Index sets JSON");
    simulate->add_option("--out", sim.out, "Write the report JSON here");

    DeriveOptions der;
    auto *derive = app.add_subcommand("derive", "Derive errors and index sets from a solution");
    add_common(derive, common);
    derive->add_option("--solution-file", der.solution_file, "Solution pair JSON")->required();
    derive->add_option("--measurements-file", der.measurements_file, "King's families JSON")
        ->required();
    derive->add_option("--out", der.out, "Write the derived model JSON here");

    std::string export_dir;
    auto *exporter =
        app.add_subcommand("export-example", "Write the qubit example as JSON input files");
    exporter->add_option("--dir", export_dir, "Target directory");

    std::vector<const char *> argv{"kingcode"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        std::ostringstream o_out;
        std::ostringstream o_err;
        app.exit(e, o_out, o_err);
        err << o_err.str() << o_out.str();
        return kUsageError;
    }

    try {
        if (*verify) {
            return cmd_verify_example(common, inject_fault, out);
        }
        if (*bipartite) {
            return cmd_build_bipartite(common, bip, out);
        }
        if (*ghz_cmd) {
            return cmd_build_ghz(common, ghz, out);
        }
        if (*simulate) {
            return cmd_simulate(common, sim, out);
        }
        if (*derive) {
            return cmd_derive(common, der, out);
        }
        if (*exporter) {
            return cmd_export_example(export_dir, out);
        }
    } catch (const InvalidInput &e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const VerificationFailure &e) {
        err << "verification failed: " << e.what() << '\n';
        return kVerificationFailure;
    }
    return kUsageError;
}

} // namespace kingcode::cli
