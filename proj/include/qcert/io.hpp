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

#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "qcert/network.hpp"
#include "qcert/selftest.hpp"

namespace qcert {

using json = nlohmann::json;

inline constexpr const char *kSchemaVersion = "qcert/v1";

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

json to_json(const ComplexMatrix &m);
json to_json(const ComplexVector &v);
ComplexMatrix matrix_from_json(const json &j, const std::string &path);
ComplexVector vector_from_json(const json &j, const std::string &path);

json to_json(const PureState &s);
json to_json(const DensityMatrix &rho);
json to_json(const Povm &p);
json to_json(const InputEnsemble &e);
PureState pure_state_from_json(const json &j, const std::string &path);
DensityMatrix density_from_json(const json &j, const std::string &path);
Povm povm_from_json(const json &j, const std::string &path);
InputEnsemble ensemble_from_json(const json &j, const std::string &path);

/// Optional generating model stored next to quantum-classical tables.
struct QcModel {
    DensityMatrix state;
    Povm alice;
    std::vector<Povm> bob;
};

json to_json(const ProbabilityTable &t, const std::optional<QcModel> &model = std::nullopt);
ProbabilityTable table_from_json(const json &j, std::optional<QcModel> *model = nullptr);

json to_json(const TeleportationData &d);
TeleportationData teleport_from_json(const json &j);

json to_json(const CertReport &r);
json to_json(const FidelityBound &b);
json to_json(const CertificationPlan &p);
CertReport report_from_json(const json &j);
FidelityBound bound_from_json(const json &j);
CertificationPlan plan_from_json(const json &j);
json to_json(const ChainSpec &s);
ChainSpec chain_from_json(const json &j);

/// State, measurement and ensemble choices for synthetic data.
struct ExperimentSpec {
    std::string scenario;  // mdi, qc, tele or chain
    std::size_t d = 2;
    DensityMatrix state;
    Povm alice;
    Povm bob;                  // mdi
    std::vector<Povm> bob_qc;  // qc
    InputEnsemble ens_a;
    InputEnsemble ens_b;
    std::optional<ChainSpec> chain;
    std::optional<std::uint64_t> shots;
};
ExperimentSpec experiment_from_json(const json &j);

/// Parses a file; syntax errors become SchemaError with line and column.
json read_json_file(const std::string &path);
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace qcert
