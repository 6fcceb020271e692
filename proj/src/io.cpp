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

#include "qcert/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qcert/errors.hpp"

namespace qcert {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string sub(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }
std::string sub(const std::string &path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json &field(const json &j, const std::string &key, const std::string &path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(sub(path, key), "missing field");
    return *it;
}

double number(const json &j, const std::string &path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

std::size_t count(const json &j, const std::string &path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string text(const json &j, const std::string &path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

const json &array(const json &j, const std::string &path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    return j;
}

std::vector<std::size_t> dims_of(const json &j, const std::string &path) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(count(j[i], sub(path, i)));
    return out;
}

cplx complex_of(const json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [re, im]");
    return {number(j[0], sub(path, 0)), number(j[1], sub(path, 1))};
}

void check_header(const json &j, const std::string &kind) {
    if (!j.is_object()) throw SchemaError("<root>", "expected an object");
    if (j.contains("schema") && j["schema"] != kSchemaVersion)
        throw SchemaError("schema", "unsupported schema " + j["schema"].dump());
    if (j.contains("kind") && j["kind"] != kind)
        throw SchemaError("kind", "expected \"" + kind + "\", got " + j["kind"].dump());
}

json header(const std::string &kind) { return json{{"schema", kSchemaVersion}, {"kind", kind}}; }

// Runs a constructor and reports its invariant failures at `path`.
template <class F>
auto at_path(const std::string &path, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const SchemaError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw SchemaError(path, e.what());
    } catch (const DataError &e) {
        throw SchemaError(path, e.what());
    } catch (const NumericalError &e) {
        throw SchemaError(path, e.what());
    } catch (const PreconditionError &e) {
        throw SchemaError(path, e.what());
    }
}

Scenario scenario_from(const std::string &s, const std::string &path) {
    if (s == "joint") return Scenario::joint;
    if (s == "qc") return Scenario::qc;
    throw SchemaError(path, "unknown table scenario \"" + s + "\"");
}

DensityMatrix state_spec(const json &j, std::size_t d, const std::string &path) {
    if (!j.is_object()) throw SchemaError(path, "expected a state object");
    const std::string type = j.contains("type") ? text(j["type"], sub(path, "type")) : "matrix";
    return at_path(path, [&] {
        if (type == "isotropic") return isotropic_state(d, number(field(j, "p", path), sub(path, "p")));
        if (type == "maximally_entangled") return DensityMatrix(maximally_entangled(d).projector());
        if (type == "matrix") return density_from_json(j, path);
        throw SchemaError(sub(path, "type"), "unknown state type \"" + type + "\"");
    });
}

Povm measurement_spec(const json &j, std::size_t d, const std::string &path) {
    if (!j.is_object()) throw SchemaError(path, "expected a measurement object");
    const std::string type = j.contains("type") ? text(j["type"], sub(path, "type")) : "povm";
    if (type == "bsm") {
        const double eta = j.contains("eta") ? number(j["eta"], sub(path, "eta")) : 1.0;
        return at_path(path, [&] { return noisy_bsm(d, eta); });
    }
    if (type == "povm") return povm_from_json(j, path);
    throw SchemaError(sub(path, "type"), "unknown measurement type \"" + type + "\"");
}

InputEnsemble ensemble_spec(const json &j, std::size_t d, const std::string &path) {
    if (j.is_string()) return at_path(path, [&] { return named_ensemble(j.get<std::string>(), d); });
    return ensemble_from_json(j, path);
}

}  // namespace

json to_json(const ComplexMatrix &m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        data.push_back(row);
    }
    return {{"dims", {m.rows(), m.cols()}}, {"data", data}};
}

json to_json(const ComplexVector &v) {
    json data = json::array();
    for (Eigen::Index r = 0; r < v.size(); ++r) data.push_back({v(r).real(), v(r).imag()});
    return {{"dims", {v.size()}}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json &j, const std::string &path) {
    auto dims = dims_of(field(j, "dims", path), sub(path, "dims"));
    if (dims.size() != 2) throw SchemaError(sub(path, "dims"), "matrix dims must have two entries");
    const auto &data = array(field(j, "data", path), sub(path, "data"));
    if (data.size() != dims[0]) throw SchemaError(sub(path, "data"), "row count does not match dims");
    if (dims[0] * dims[1] > dim_cap() * dim_cap()) throw CapacityError("matrix at " + path + " exceeds the dimension cap");
    ComplexMatrix m(dims[0], dims[1]);
    for (std::size_t r = 0; r < dims[0]; ++r) {
        const auto rp = sub(sub(path, "data"), r);
        if (!data[r].is_array() || data[r].size() != dims[1]) throw SchemaError(rp, "column count does not match dims");
        for (std::size_t c = 0; c < dims[1]; ++c) m(r, c) = complex_of(data[r][c], sub(rp, c));
    }
    return m;
}

ComplexVector vector_from_json(const json &j, const std::string &path) {
    auto dims = dims_of(field(j, "dims", path), sub(path, "dims"));
    if (dims.size() != 1) throw SchemaError(sub(path, "dims"), "vector dims must have one entry");
    const auto &data = array(field(j, "data", path), sub(path, "data"));
    if (data.size() != dims[0]) throw SchemaError(sub(path, "data"), "length does not match dims");
    ComplexVector v(dims[0]);
    for (std::size_t r = 0; r < dims[0]; ++r) v(r) = complex_of(data[r], sub(sub(path, "data"), r));
    return v;
}

json to_json(const PureState &s) { return {{"subsystems", s.shape().dims()}, {"amplitudes", to_json(s.amplitudes())}}; }

json to_json(const DensityMatrix &rho) { return {{"subsystems", rho.shape().dims()}, {"matrix", to_json(rho.matrix())}}; }

json to_json(const Povm &p) {
    json effects = json::array();
    for (std::size_t a = 0; a < p.size(); ++a) effects.push_back(to_json(p.effect(a)));
    return {{"subsystems", p.shape().dims()}, {"labels", p.labels()}, {"effects", effects}};
}

json to_json(const InputEnsemble &e) {
    json states = json::array();
    for (auto &s : e.states()) states.push_back(to_json(s.amplitudes()));
    return {{"labels", e.labels()}, {"states", states}};
}

PureState pure_state_from_json(const json &j, const std::string &path) {
    auto v = vector_from_json(field(j, "amplitudes", path), sub(path, "amplitudes"));
    auto dims = j.contains("subsystems") ? dims_of(j["subsystems"], sub(path, "subsystems"))
                                         : std::vector<std::size_t>{static_cast<std::size_t>(v.size())};
    return at_path(path, [&] { return PureState(v, SystemShape(dims)); });
}

DensityMatrix density_from_json(const json &j, const std::string &path) {
    auto m = matrix_from_json(field(j, "matrix", path), sub(path, "matrix"));
    auto dims = j.contains("subsystems") ? dims_of(j["subsystems"], sub(path, "subsystems"))
                                         : std::vector<std::size_t>{static_cast<std::size_t>(m.rows())};
    return at_path(path, [&] { return DensityMatrix(m, SystemShape(dims)); });
}

Povm povm_from_json(const json &j, const std::string &path) {
    const auto dims = dims_of(field(j, "subsystems", path), sub(path, "subsystems"));
    const auto &ej = array(field(j, "effects", path), sub(path, "effects"));
    std::vector<ComplexMatrix> effects;
    for (std::size_t a = 0; a < ej.size(); ++a) effects.push_back(matrix_from_json(ej[a], sub(sub(path, "effects"), a)));
    std::vector<std::string> labels;
    if (j.contains("labels"))
        for (std::size_t a = 0; a < array(j["labels"], sub(path, "labels")).size(); ++a)
            labels.push_back(text(j["labels"][a], sub(sub(path, "labels"), a)));
    return at_path(path, [&] { return Povm(effects, SystemShape(dims), labels); });
}

InputEnsemble ensemble_from_json(const json &j, const std::string &path) {
    const auto &sj = array(field(j, "states", path), sub(path, "states"));
    std::vector<PureState> states;
    for (std::size_t x = 0; x < sj.size(); ++x) {
        auto v = vector_from_json(sj[x], sub(sub(path, "states"), x));
        states.push_back(at_path(sub(sub(path, "states"), x), [&] { return PureState(v); }));
    }
    std::vector<std::string> labels;
    if (j.contains("labels"))
        for (std::size_t x = 0; x < array(j["labels"], sub(path, "labels")).size(); ++x)
            labels.push_back(text(j["labels"][x], sub(sub(path, "labels"), x)));
    if (!labels.empty() && labels.size() != states.size())
        throw SchemaError(sub(path, "labels"), "label count does not match state count");
    return at_path(path, [&] { return InputEnsemble(states, labels); });
}

json to_json(const ProbabilityTable &t, const std::optional<QcModel> &model) {
    json j = header("probability_table");
    j["scenario"] = to_string(t.scenario);
    j["d"] = t.d;
    j["n_a"] = t.n_a;
    j["n_b"] = t.n_b;
    j["n_settings"] = t.n_settings;
    j["ensembles"]["alice"] = to_json(t.alice);
    if (t.bob) j["ensembles"]["bob"] = to_json(*t.bob);
    json rec = json::array();
    for (auto &e : t.entries) rec.push_back({{"a", e.a}, {"b", e.b}, {"x", e.x}, {"y", e.y}, {"p", e.p}});
    j["records"] = rec;
    if (model) {
        json bob = json::array();
        for (auto &p : model->bob) bob.push_back(to_json(p));
        j["model"] = {{"state", to_json(model->state)}, {"alice", to_json(model->alice)}, {"bob", bob}};
    }
    return j;
}

ProbabilityTable table_from_json(const json &j, std::optional<QcModel> *model) {
    check_header(j, "probability_table");
    ProbabilityTable t;
    t.scenario = scenario_from(text(field(j, "scenario", ""), "scenario"), "scenario");
    t.d = count(field(j, "d", ""), "d");
    t.n_a = count(field(j, "n_a", ""), "n_a");
    t.n_b = count(field(j, "n_b", ""), "n_b");
    t.n_settings = j.contains("n_settings") ? count(j["n_settings"], "n_settings") : 0;
    const auto &ens = field(j, "ensembles", "");
    t.alice = ensemble_from_json(field(ens, "alice", "ensembles"), "ensembles.alice");
    if (ens.contains("bob")) t.bob = ensemble_from_json(ens["bob"], "ensembles.bob");
    if (t.scenario == Scenario::joint && !t.bob) throw SchemaError("ensembles.bob", "joint tables need Bob's ensemble");
    const auto &rec = array(field(j, "records", ""), "records");
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const auto p = sub("records", i);
        ProbabilityEntry e{count(field(rec[i], "a", p), sub(p, "a")), count(field(rec[i], "b", p), sub(p, "b")),
                           count(field(rec[i], "x", p), sub(p, "x")), count(field(rec[i], "y", p), sub(p, "y")),
                           number(field(rec[i], "p", p), sub(p, "p"))};
        if (e.a >= t.n_a || e.b >= t.n_b || e.x >= t.n_x() || e.y >= t.n_y())
            throw SchemaError(p, "index out of range");
        t.entries.push_back(e);
    }
    at_path("records", [&] { t.reindex(); });
    if (model && j.contains("model")) {
        const auto &m = j["model"];
        QcModel q;
        q.state = density_from_json(field(m, "state", "model"), "model.state");
        q.alice = povm_from_json(field(m, "alice", "model"), "model.alice");
        const auto &bj = array(field(m, "bob", "model"), "model.bob");
        for (std::size_t y = 0; y < bj.size(); ++y) q.bob.push_back(povm_from_json(bj[y], sub("model.bob", y)));
        *model = q;
    }
    return t;
}

json to_json(const TeleportationData &d) {
    json j = header("teleportation_data");
    j["d"] = d.d;
    j["ensemble"] = to_json(d.ensemble);
    json phi = json::array();
    for (auto &row : d.phi) {
        json r = json::array();
        for (auto &m : row) r.push_back(to_json(m));
        phi.push_back(r);
    }
    j["phi"] = phi;
    return j;
}

TeleportationData teleport_from_json(const json &j) {
    check_header(j, "teleportation_data");
    TeleportationData d;
    d.d = count(field(j, "d", ""), "d");
    d.ensemble = ensemble_from_json(field(j, "ensemble", ""), "ensemble");
    if (d.ensemble.d() != d.d) throw SchemaError("ensemble", "state dimension does not match d");
    const auto &pj = array(field(j, "phi", ""), "phi");
    for (std::size_t a = 0; a < pj.size(); ++a) {
        const auto pa = sub("phi", a);
        if (array(pj[a], pa).size() != d.ensemble.size()) throw SchemaError(pa, "expected one state per input");
        std::vector<ComplexMatrix> row;
        for (std::size_t x = 0; x < pj[a].size(); ++x) row.push_back(matrix_from_json(pj[a][x], sub(pa, x)));
        d.phi.push_back(row);
    }
    at_path("phi", [&] { d.validate(); });
    return d;
}

json to_json(const CertReport &r) {
    json j = header("cert_report");
    j["scenario"] = r.scenario;
    j["pass"] = r.pass;
    j["fidelity_estimate"] = r.fidelity_estimate;
    j["tolerance"] = r.tolerance;
    j["max_residual"] = r.max_residual();
    j["residuals"] = r.residuals;
    j["diagnostics"] = r.diagnostics;
    j["notes"] = r.notes;
    return j;
}

json to_json(const FidelityBound &b) {
    json j = header("fidelity_bound");
    j["value"] = b.value ? json(*b.value) : json(nullptr);
    j["raw_value"] = b.raw_value;
    j["clamped"] = b.clamped;
    j["status"] = to_string(b.status);
    j["gap"] = b.gap;
    j["max_residual"] = b.max_residual;
    j["min_eigenvalue"] = b.min_eigenvalue;
    j["iterations"] = b.iterations;
    return j;
}

json to_json(const CertificationPlan &p) {
    json j = header("certification_plan");
    j["sources"] = p.sources;
    j["end_to_end"] = p.end_to_end;
    return j;
}

namespace {

bool flag(const json &j, const std::string &path) {
    if (!j.is_boolean()) throw SchemaError(path, "expected true or false");
    return j.get<bool>();
}

std::map<std::string, double> number_map(const json &j, const std::string &path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object of numbers");
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = number(it.value(), sub(path, it.key()));
    return out;
}

std::vector<std::string> strings(const json &j, const std::string &path) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(text(j[i], sub(path, i)));
    return out;
}

}  // namespace

CertReport report_from_json(const json &j) {
    check_header(j, "cert_report");
    CertReport r;
    r.scenario = text(field(j, "scenario", ""), "scenario");
    r.pass = flag(field(j, "pass", ""), "pass");
    r.fidelity_estimate = number(field(j, "fidelity_estimate", ""), "fidelity_estimate");
    r.tolerance = number(field(j, "tolerance", ""), "tolerance");
    r.residuals = number_map(field(j, "residuals", ""), "residuals");
    r.diagnostics = number_map(field(j, "diagnostics", ""), "diagnostics");
    r.notes = strings(field(j, "notes", ""), "notes");
    return r;
}

FidelityBound bound_from_json(const json &j) {
    check_header(j, "fidelity_bound");
    FidelityBound b;
    const auto &v = field(j, "value", "");
    if (!v.is_null()) b.value = number(v, "value");
    b.raw_value = number(field(j, "raw_value", ""), "raw_value");
    b.clamped = flag(field(j, "clamped", ""), "clamped");
    const std::string st = text(field(j, "status", ""), "status");
    bool known = false;
    for (auto s : {SdpStatus::optimal, SdpStatus::infeasible, SdpStatus::max_iter, SdpStatus::numerical_failure})
        if (to_string(s) == st) {
            b.status = s;
            known = true;
        }
    if (!known) throw SchemaError("status", "unknown solver status \"" + st + "\"");
    b.gap = number(field(j, "gap", ""), "gap");
    b.max_residual = number(field(j, "max_residual", ""), "max_residual");
    b.min_eigenvalue = number(field(j, "min_eigenvalue", ""), "min_eigenvalue");
    const auto &it = field(j, "iterations", "");
    if (!it.is_number_integer()) throw SchemaError("iterations", "expected an integer");
    b.iterations = it.get<int>();
    return b;
}

CertificationPlan plan_from_json(const json &j) {
    check_header(j, "certification_plan");
    CertificationPlan p;
    p.sources = strings(field(j, "sources", ""), "sources");
    p.end_to_end = text(field(j, "end_to_end", ""), "end_to_end");
    return p;
}

json to_json(const ChainSpec &s) {
    json j = header("chain");
    j["d"] = s.d;
    json src = json::array();
    for (auto &rho : s.sources) src.push_back(to_json(rho));
    j["sources"] = src;
    j["eta"] = s.eta;
    j["first_trusted"] = s.first_trusted;
    j["last_trusted"] = s.last_trusted;
    return j;
}

ChainSpec chain_from_json(const json &j) {
    check_header(j, "chain");
    ChainSpec s;
    s.d = j.contains("d") ? count(j["d"], "d") : 2;
    if (s.d < 2) throw SchemaError("d", "local dimension must be at least 2");
    const auto &src = field(j, "sources", "");
    if (src.is_array()) {
        for (std::size_t k = 0; k < src.size(); ++k) s.sources.push_back(state_spec(src[k], s.d, sub("sources", k)));
    } else {
        // A single spec repeated n_sources times.
        const auto n = count(field(j, "n_sources", ""), "n_sources");
        auto rho = state_spec(src, s.d, "sources");
        s.sources.assign(n, rho);
    }
    if (j.contains("n_sources") && count(j["n_sources"], "n_sources") != s.sources.size())
        throw SchemaError("n_sources", "does not match the number of sources");
    if (s.sources.empty()) throw SchemaError("sources", "chain needs at least one source");
    if (j.contains("eta")) {
        if (j["eta"].is_array()) {
            for (std::size_t k = 0; k < j["eta"].size(); ++k) s.eta.push_back(number(j["eta"][k], sub("eta", k)));
        } else {
            s.eta.assign(s.sources.size() - 1, number(j["eta"], "eta"));
        }
    } else {
        s.eta.assign(s.sources.size() - 1, 1.0);
    }
    if (j.contains("first_trusted")) {
        if (!j["first_trusted"].is_boolean()) throw SchemaError("first_trusted", "expected a boolean");
        s.first_trusted = j["first_trusted"].get<bool>();
    }
    if (j.contains("last_trusted")) {
        if (!j["last_trusted"].is_boolean()) throw SchemaError("last_trusted", "expected a boolean");
        s.last_trusted = j["last_trusted"].get<bool>();
    }
    at_path("", [&] { s.validate(); });
    return s;
}

ExperimentSpec experiment_from_json(const json &j) {
    check_header(j, "experiment");
    ExperimentSpec e;
    e.scenario = text(field(j, "scenario", ""), "scenario");
    if (e.scenario != "mdi" && e.scenario != "qc" && e.scenario != "tele" && e.scenario != "chain")
        throw SchemaError("scenario", "expected mdi, qc, tele or chain");
    e.d = j.contains("d") ? count(j["d"], "d") : 2;
    if (e.d < 2) throw SchemaError("d", "dimension must be at least 2");
    if (j.contains("shots")) e.shots = count(j["shots"], "shots");
    if (e.scenario == "chain") {
        e.chain = chain_from_json(field(j, "chain", ""));
        e.d = e.chain->d;
        e.alice = j.contains("alice") ? measurement_spec(j["alice"], e.d, "alice") : bsm(e.d);
        e.ens_a = ensemble_spec(j.contains("ensemble") ? j["ensemble"] : json("standard"), e.d, "ensemble");
        return e;
    }
    if (e.scenario == "qc" && e.d != 2) throw SchemaError("d", "quantum-classical scenario is defined for qubits");
    e.state = state_spec(field(j, "state", ""), e.d, "state");
    e.alice = j.contains("alice") ? measurement_spec(j["alice"], e.d, "alice") : bsm(e.d);
    if (e.scenario == "mdi") {
        e.bob = j.contains("bob") ? measurement_spec(j["bob"], e.d, "bob") : bsm(e.d);
        const json &ens = j.contains("ensembles") ? j["ensembles"] : json::object();
        e.ens_a = ensemble_spec(ens.contains("alice") ? ens["alice"] : json("standard"), e.d, "ensembles.alice");
        e.ens_b = ensemble_spec(ens.contains("bob") ? ens["bob"] : json("standard"), e.d, "ensembles.bob");
    } else if (e.scenario == "qc") {
        if (j.contains("bob") && j["bob"].is_array()) {
            for (std::size_t y = 0; y < j["bob"].size(); ++y) e.bob_qc.push_back(povm_from_json(j["bob"][y], sub("bob", y)));
        } else {
            double v = 1.0;
            if (j.contains("bob")) v = number(field(j["bob"], "visibility", "bob"), "bob.visibility");
            e.bob_qc = at_path("bob", [&] { return qc_bob_settings(v); });
        }
        e.ens_a = named_ensemble("qc", 2);
    } else {
        e.ens_a = ensemble_spec(j.contains("ensemble") ? j["ensemble"] : json("standard"), e.d, "ensemble");
    }
    return e;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string &path) {
    const std::string s = read_text_file(path);
    try {
        return json::parse(s);
    } catch (const json::parse_error &e) {
        // Convert the byte offset to a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, s.size()); ++i) line += s[i] == '\n';
        throw SchemaError(path + ":" + std::to_string(line), e.what());
    }
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path);
    out << text;
}

}  // namespace qcert
