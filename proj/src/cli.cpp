// Copyright 2026 The qcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qcert/errors.hpp"
#include "qcert/io.hpp"

namespace qcert {

std::vector<double> parse_grid(const std::string &spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ArgumentError("grid entry '" + item + "' is not a number");
        }
    }
    if (parts.size() != 3) throw ArgumentError("grid must look like start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0) || stop < start) throw ArgumentError("grid needs step > 0 and stop >= start");
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        double p = start + static_cast<double>(k) * step;
        if (p > stop + 1e-12) break;
        if (std::abs(p - stop) <= 1e-12) p = stop;
        // Trim accumulated binary noise so 0.05*3 prints as 0.15.
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", p);
        out.push_back(std::stod(buf));
        if (out.size() > 1000000) throw ArgumentError("grid has too many points");
    }
    return out;
}

namespace {

void emit(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") out << text;
    else write_text_file(path, text);
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

DensityMatrix generated_state(const std::string &kind, std::size_t d, double p) {
    if (kind == "isotropic") return isotropic_state(d, p);
    if (kind == "maximally_entangled") return DensityMatrix(maximally_entangled(d).projector());
    throw ArgumentError("unknown --state '" + kind + "' (expected isotropic or maximally_entangled)");
}

struct Options {
    std::string out;
    // gen
    std::string spec;
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
    // certify
    std::string data, reference;
    double tol = 1e-6;
    // tele
    std::string state = "isotropic", inputs = "standard", grid, export_sdpa;
    std::size_t d = 2;
    double p = 1.0;
    double solver_tol = 1e-8;
    // chain
    bool plan_only = false, bound = false;
};

int cmd_gen(const Options &o, std::ostream &out) {
    auto spec = experiment_from_json(read_json_file(o.spec));
    const std::uint64_t shots = o.shots ? o.shots : spec.shots.value_or(0);
    if (spec.scenario == "mdi" || spec.scenario == "qc") {
        ProbabilityTable t;
        std::optional<QcModel> model;
        if (spec.scenario == "mdi") {
            t = table_joint(spec.state, spec.alice, spec.bob, spec.ens_a, spec.ens_b);
        } else {
            t = table_qc(spec.state, spec.alice, spec.bob_qc, spec.ens_a);
            model = QcModel{spec.state, spec.alice, spec.bob_qc};
        }
        if (shots) t = sample_table(t, shots, o.seed);
        emit(o.out, dump(to_json(t, model)), out);
        return kPass;
    }
    if (shots) throw ArgumentError("--shots applies to probability tables only");
    const DensityMatrix rho = spec.scenario == "chain" ? chain_state(*spec.chain) : spec.state;
    emit(o.out, dump(to_json(teleport(rho, spec.alice, spec.ens_a))), out);
    return kPass;
}

int cmd_certify(const std::string &mode, const Options &o, std::ostream &out) {
    std::optional<QcModel> model;
    auto table = table_from_json(read_json_file(o.data), &model);
    CertReport r;
    if (mode == "mdi") {
        if (table.scenario != Scenario::joint) throw ArgumentError("mdi certification needs a joint probability table");
        PureState ref = o.reference.empty() ? maximally_entangled(table.d)
                                            : pure_state_from_json(read_json_file(o.reference), "");
        auto rec = reconstruct(table);
        r = check_theorem1(rec.set, ref, o.tol);
        r.diagnostics["condition_number"] = rec.condition_number;
        r.diagnostics["reconstruction_residual"] = rec.residual_norm;
        r.notes.push_back("reference value for the visibility-0.95 Bell measurement example: 0.893");
    } else {
        if (table.scenario != Scenario::qc) throw ArgumentError("qc certification needs a quantum-classical table");
        r = qc_analyze(table, o.tol);
        if (model) {
            r.notes.clear();
            auto circ = qc_circuit(model->state, model->alice, model->bob);
            const double ac = anticommutator_norm(model->state, model->bob);
            r.diagnostics["anticommutator_norm"] = ac;
            r.diagnostics["circuit_trace"] = circ.trace;
            r.residuals["anticommutator"] = ac;
            r.residuals["circuit_fidelity_shortfall"] = 1 - circ.fidelity;
            r.fidelity_estimate = circ.fidelity;
            r.finalize();
        }
    }
    emit(o.out, dump(to_json(r)), out);
    return r.pass ? kPass : kFail;
}

TeleportationData tele_data(const Options &o, double p) {
    if (!o.data.empty()) return teleport_from_json(read_json_file(o.data));
    if (o.d < 2) throw ArgumentError("--d must be at least 2");
    return teleport(generated_state(o.state, o.d, p), bsm(o.d), named_ensemble(o.inputs, o.d));
}

int cmd_tele_bound(const Options &o, std::ostream &out) {
    auto data = tele_data(o, o.p);
    if (!o.export_sdpa.empty()) write_text_file(o.export_sdpa, export_sdpa(realify(build_sdp(data))));
    SolverOptions so;
    so.tol = o.solver_tol;
    auto b = fidelity_lower_bound(data, so);
    emit(o.out, dump(to_json(b)), out);
    return b.value ? kPass : kSolverFailure;
}

int cmd_tele_sweep(const Options &o, std::ostream &out) {
    if (!o.data.empty()) throw ArgumentError("sweep generates its own data; use --state, --d and --inputs");
    const auto grid = parse_grid(o.grid);
    SolverOptions so;
    so.tol = o.solver_tol;
    std::string csv = "p,bound,status,gap\n";
    bool all_ok = true;
    for (double p : grid) {
        auto b = fidelity_lower_bound(tele_data(o, p), so);
        all_ok = all_ok && b.value.has_value();
        csv += format_number(p) + "," + (b.value ? format_number(*b.value) : "") + "," + to_string(b.status) + "," +
               format_number(b.gap) + "\n";
    }
    emit(o.out, csv, out);
    return all_ok ? kPass : kSolverFailure;
}

int cmd_chain(const Options &o, std::ostream &out) {
    auto spec = chain_from_json(read_json_file(o.spec));
    json j = to_json(plan(spec));
    int code = kPass;
    if (!o.plan_only) {
        const auto rho = chain_state(spec);
        j["chain_fidelity"] = pure_fidelity(rho.op(), maximally_entangled(spec.d).amplitudes());
        if (o.bound) {
            SolverOptions so;
            so.tol = o.solver_tol;
            auto b = certify_chain(spec, named_ensemble(o.inputs, spec.d), so);
            j["bound"] = to_json(b);
            if (!b.value) code = kSolverFailure;
        }
    }
    emit(o.out, dump(j), out);
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qcert: self-testing of Bell state measurements and teleportation fidelity bounds", "qcert"};
    app.require_subcommand(1);
    Options o;

    auto *gen = app.add_subcommand("gen", "Generate a probability table or teleportation data from an experiment spec");
    gen->add_option("spec", o.spec, "Experiment spec (JSON)")->required();
    gen->add_option("-o,--out", o.out, "Output path (default stdout)");
    gen->add_option("--shots", o.shots, "Sample each row with this many shots");
    gen->add_option("--seed", o.seed, "Sampling seed");

    auto *cert = app.add_subcommand("certify", "Certify a probability table");
    cert->require_subcommand(1);
    std::string mode;
    for (const char *m : {"mdi", "qc"}) {
        auto *c = cert->add_subcommand(m, std::string(m) == "mdi" ? "Quantum inputs on both sides"
                                                                   : "Quantum-classical inputs");
        c->add_option("data", o.data, "Probability table (JSON)")->required();
        c->add_option("reference", o.reference, "Reference pure state (JSON)");
        c->add_option("--tol", o.tol, "Residual tolerance");
        c->add_option("-o,--out", o.out, "Report path (default stdout)");
        c->callback([&mode, m] { mode = m; });
    }

    auto *tele = app.add_subcommand("tele", "Teleportation fidelity bounds");
    tele->require_subcommand(1);
    auto add_tele = [&](CLI::App *c) {
        c->add_option("--state", o.state, "Generated state: isotropic or maximally_entangled");
        c->add_option("--d", o.d, "Local dimension");
        c->add_option("--inputs", o.inputs, "Named input ensemble");
        c->add_option("--solver-tol", o.solver_tol, "Interior-point tolerance");
        c->add_option("-o,--out", o.out, "Output path (default stdout)");
    };
    auto *bound = tele->add_subcommand("bound", "Lower bound for one data set");
    add_tele(bound);
    bound->add_option("--data", o.data, "Teleportation data (JSON)");
    bound->add_option("--p", o.p, "Isotropic visibility");
    bound->add_option("--export-sdpa", o.export_sdpa, "Also write the real program in SDPA format");
    auto *sweep = tele->add_subcommand("sweep", "Bounds over a visibility grid (CSV)");
    add_tele(sweep);
    sweep->add_option("--p-grid", o.grid, "start:stop:step, endpoints inclusive")->required();

    auto *chain = app.add_subcommand("chain", "Certification plan and end-to-end bound for a repeater chain");
    chain->add_option("spec", o.spec, "Chain spec (JSON)")->required();
    chain->add_flag("--plan-only", o.plan_only, "Skip simulation and bounds");
    chain->add_flag("--bound", o.bound, "Compute the end-to-end teleportation bound");
    chain->add_option("--inputs", o.inputs, "Named input ensemble for the bound");
    chain->add_option("--solver-tol", o.solver_tol, "Interior-point tolerance");
    chain->add_option("-o,--out", o.out, "Output path (default stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (gen->parsed()) return cmd_gen(o, out);
        if (cert->parsed()) return cmd_certify(mode, o, out);
        if (bound->parsed()) return cmd_tele_bound(o, out);
        if (sweep->parsed()) return cmd_tele_sweep(o, out);
        if (chain->parsed()) return cmd_chain(o, out);
    } catch (const SchemaError &e) {
        err << "schema error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace qcert
