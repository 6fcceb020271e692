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

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"
#include "qcert/errors.hpp"
#include "qcert/io.hpp"

using namespace qcert;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("qcert_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string file(const std::string &name, const std::string &content = "") {
        auto p = (dir_ / name).string();
        if (!content.empty()) write_text_file(p, content);
        return p;
    }

    std::filesystem::path dir_;
};

const char *kMdiIdeal = R"({"schema":"qcert/v1","kind":"experiment","scenario":"mdi","d":2,
  "state":{"type":"maximally_entangled"}})";
const char *kMdiNoisy = R"({"schema":"qcert/v1","kind":"experiment","scenario":"mdi","d":2,
  "state":{"type":"maximally_entangled"},"alice":{"type":"bsm","eta":0.95},"bob":{"type":"bsm","eta":0.95}})";
const char *kQcIdeal = R"({"schema":"qcert/v1","kind":"experiment","scenario":"qc",
  "state":{"type":"maximally_entangled"}})";
const char *kMdiIncomplete = R"({"schema":"qcert/v1","kind":"experiment","scenario":"mdi","d":2,
  "state":{"type":"maximally_entangled"},
  "ensembles":{"alice":{"labels":["0","1","+"],"states":[
     {"dims":[2],"data":[[1,0],[0,0]]},{"dims":[2],"data":[[0,0],[1,0]]},
     {"dims":[2],"data":[[0.7071067811865476,0],[0.7071067811865476,0]]}]}}})";

}  // namespace

TEST(grid, parse) {
    auto g = parse_grid("0:1:0.25");
    EXPECT_EQ(g, (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
    auto h = parse_grid("0:1:0.05");
    ASSERT_EQ(h.size(), 21u);
    EXPECT_EQ(h[3], 0.15);
    EXPECT_EQ(h.back(), 1.0);
    EXPECT_EQ(parse_grid("0.5:0.5:1"), std::vector<double>{0.5});
    EXPECT_EQ(parse_grid("0:0.3:0.1").size(), 4u);
    EXPECT_THROW(parse_grid("0:1"), ArgumentError);
    EXPECT_THROW(parse_grid("0:1:0"), ArgumentError);
    EXPECT_THROW(parse_grid("1:0:0.1"), ArgumentError);
    EXPECT_THROW(parse_grid("a:1:0.1"), ArgumentError);
}

TEST_F(CliTest, mdi_ideal_and_noisy) {
    auto table = file("t.json");
    ASSERT_EQ(run({"gen", file("s.json", kMdiIdeal), "-o", table}).code, kPass);
    auto t = table_from_json(read_json_file(table));
    EXPECT_EQ(t.entries.size(), 16u * 16u);
    auto r = run({"certify", "mdi", table, "--tol", "1e-9"});
    EXPECT_EQ(r.code, kPass) << r.err;
    auto rep = json::parse(r.out);
    EXPECT_TRUE(rep["pass"].get<bool>());
    EXPECT_NEAR(rep["fidelity_estimate"].get<double>(), 1, 1e-9);

    auto noisy = file("n.json");
    ASSERT_EQ(run({"gen", file("sn.json", kMdiNoisy), "-o", noisy}).code, kPass);
    auto out = file("report.json");
    r = run({"certify", "mdi", noisy, "--tol", "1e-6", "-o", out});
    EXPECT_EQ(r.code, kFail);
    rep = read_json_file(out);
    EXPECT_NEAR(rep["fidelity_estimate"].get<double>(), 0.926875, 1e-9);
    EXPECT_NE(rep["notes"].dump().find("0.893"), std::string::npos);
    EXPECT_EQ(to_json(report_from_json(rep)).dump(2) + "\n", read_text_file(out));
}

TEST_F(CliTest, mdi_incomplete_ensemble) {
    auto table = file("t.json");
    ASSERT_EQ(run({"gen", file("s.json", kMdiIncomplete), "-o", table}).code, kPass);
    auto r = run({"certify", "mdi", table});
    EXPECT_EQ(r.code, kInputError);
    EXPECT_NE(r.err.find("deficit"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("< 4"), std::string::npos) << r.err;
}

TEST_F(CliTest, qc_ideal) {
    auto table = file("t.json");
    ASSERT_EQ(run({"gen", file("s.json", kQcIdeal), "-o", table}).code, kPass);
    auto r = run({"certify", "qc", table, "--tol", "1e-9"});
    EXPECT_EQ(r.code, kPass) << r.err;
    auto rep = json::parse(r.out);
    EXPECT_NEAR(rep["diagnostics"]["I_qc"].get<double>(), 4, 1e-9);
    EXPECT_NEAR(rep["fidelity_estimate"].get<double>(), 1, 1e-9);
    // Without the model section the table alone still yields I_qc.
    auto j = read_json_file(table);
    j.erase("model");
    r = run({"certify", "qc", file("bare.json", j.dump())});
    EXPECT_EQ(r.code, kPass) << r.err;
    auto groups = json::parse(r.out)["diagnostics"];
    for (int g = 1; g <= 4; ++g) EXPECT_NEAR(groups["group" + std::to_string(g)].get<double>(), 1, 1e-12);
    // Wrong mode for the table kind.
    EXPECT_EQ(run({"certify", "mdi", table}).code, kInputError);
}

TEST_F(CliTest, sampling_is_reproducible) {
    auto spec = file("s.json", kMdiIdeal);
    auto a = run({"gen", spec, "--shots", "500", "--seed", "42"});
    auto b = run({"gen", spec, "--shots", "500", "--seed", "42"});
    auto c = run({"gen", spec, "--shots", "500", "--seed", "43"});
    ASSERT_EQ(a.code, kPass);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    EXPECT_EQ(to_json(table_from_json(json::parse(a.out))).dump(2) + "\n", a.out);
}

TEST_F(CliTest, tele_generation_and_bound) {
    auto spec = file("s.json", R"({"kind":"experiment","scenario":"tele","d":3,
        "state":{"type":"isotropic","p":0.5},"ensemble":"case1"})");
    auto g = run({"gen", spec});
    ASSERT_EQ(g.code, kPass) << g.err;
    auto data = json::parse(g.out);
    EXPECT_EQ(data["phi"].size(), 9u);
    EXPECT_EQ(data["phi"][0].size(), 4u);
    EXPECT_EQ(to_json(teleport_from_json(data)).dump(2) + "\n", g.out);

    auto sdpa = file("ideal.dat-s");
    auto r = run({"tele", "bound", "--d", "2", "--p", "1", "--export-sdpa", sdpa});
    EXPECT_EQ(r.code, kPass) << r.err;
    auto b = json::parse(r.out);
    EXPECT_NEAR(b["value"].get<double>(), 1, 1e-5);
    EXPECT_EQ(to_json(bound_from_json(b)).dump(2) + "\n", r.out);
    auto prog = import_sdpa(read_text_file(sdpa));
    EXPECT_EQ(export_sdpa(prog), read_text_file(sdpa));

    auto data_file = file("d.json", g.out);
    r = run({"tele", "bound", "--data", data_file});
    EXPECT_EQ(r.code, kPass) << r.err;
    EXPECT_LE(json::parse(r.out)["value"].get<double>(), 0.5 + 0.5 / 9 + 1e-5);
}

TEST_F(CliTest, tele_sweep) {
    auto r1 = run({"tele", "sweep", "--state", "isotropic", "--d", "3", "--inputs", "case1", "--p-grid", "0:1:0.25"});
    auto r2 = run({"tele", "sweep", "--state", "isotropic", "--d", "3", "--inputs", "case2", "--p-grid", "0:1:0.25"});
    ASSERT_EQ(r1.code, kPass) << r1.err;
    ASSERT_EQ(r2.code, kPass) << r2.err;
    auto c1 = csv_rows(r1.out), c2 = csv_rows(r2.out);
    ASSERT_EQ(c1.size(), 6u);
    EXPECT_EQ(c1[0], (std::vector<std::string>{"p", "bound", "status", "gap"}));
    EXPECT_EQ(c1[2][0], "0.25");
    for (std::size_t i = 1; i < c1.size(); ++i) {
        EXPECT_EQ(c1[i][2], "optimal");
        EXPECT_GE(std::stod(c2[i][1]), std::stod(c1[i][1]) - 1e-8);
        if (i > 1) EXPECT_GE(std::stod(c1[i][1]), std::stod(c1[i - 1][1]) - 1e-8);
    }
    EXPECT_EQ(run({"tele", "sweep", "--p-grid", "0:1"}).code, kInputError);
}

TEST_F(CliTest, solver_failure_rows) {
    auto r = run({"tele", "sweep", "--d", "2", "--p-grid", "0.5:1:0.5", "--solver-tol", "1e-300"});
    EXPECT_EQ(r.code, kSolverFailure);
    auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][1], "");
        EXPECT_NE(rows[i][2], "optimal");
    }
    EXPECT_EQ(run({"tele", "bound", "--d", "2", "--p", "0.8", "--solver-tol", "1e-300"}).code, kSolverFailure);
}

TEST_F(CliTest, chain) {
    auto spec3 = file("c3.json", R"({"schema":"qcert/v1","kind":"chain","d":2,"n_sources":3,
        "sources":{"type":"maximally_entangled"}})");
    auto r = run({"chain", spec3, "--plan-only"});
    ASSERT_EQ(r.code, kPass) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["sources"], json({"qc", "standard-DI", "steering"}));
    EXPECT_FALSE(j.contains("chain_fidelity"));
    auto spec2 = file("c2.json", R"({"kind":"chain","d":2,"n_sources":2,"sources":{"type":"maximally_entangled"}})");
    r = run({"chain", spec2, "--bound"});
    ASSERT_EQ(r.code, kPass) << r.err;
    j = json::parse(r.out);
    EXPECT_NEAR(j["chain_fidelity"].get<double>(), 1, 1e-10);
    EXPECT_NEAR(j["bound"]["value"].get<double>(), 1, 1e-4);
    EXPECT_EQ(run({"chain", file("bad.json", R"({"kind":"chain","d":2,"sources":[]})")}).code, kInputError);
    EXPECT_EQ(run({"chain", file("bad2.json", "{bad")}).code, kInputError);
}

TEST_F(CliTest, input_errors) {
    auto r = run({"certify", "mdi", file("bad.json", "{\n\"kind\": \n")});
    EXPECT_EQ(r.code, kInputError);
    EXPECT_NE(r.err.find("bad.json:3"), std::string::npos) << r.err;
    EXPECT_EQ(run({"certify", "mdi", (dir_ / "missing.json").string()}).code, kInputError);
    EXPECT_EQ(run({"frobnicate"}).code, kInputError);
    EXPECT_EQ(run({}).code, kInputError);
    EXPECT_EQ(run({"tele", "bound", "--state", "werner"}).code, kInputError);
    EXPECT_EQ(run({"tele", "bound", "--d", "3", "--inputs", "pauli6"}).code, kInputError);
    r = run({"gen", file("s.json", R"({"kind":"experiment","scenario":"mdi","state":{"type":"isotropic"}})")});
    EXPECT_EQ(r.code, kInputError);
    EXPECT_NE(r.err.find("state.p"), std::string::npos) << r.err;
    EXPECT_EQ(run({"--help"}).code, kPass);
}

namespace {

int run_binary(const std::string &env, const std::string &args) {
    const std::string cmd = env + " \"" QCERT_BIN "\" " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(CliTest, binary_exit_codes) {
    EXPECT_EQ(run_binary("", "--help"), kPass);
    EXPECT_EQ(run_binary("", "tele bound --d 2 --p 1"), kPass);
    auto noisy = file("n.json");
    ASSERT_EQ(run_binary("", "gen " + file("sn.json", kMdiNoisy) + " -o " + noisy), kPass);
    EXPECT_EQ(run_binary("", "certify mdi " + noisy), kFail);
    EXPECT_EQ(run_binary("", "chain " + file("bad.json", "{bad")), kInputError);
    EXPECT_EQ(run_binary("", "tele bound --d 2 --p 0.8 --solver-tol 1e-300"), kSolverFailure);
    EXPECT_EQ(run_binary("QCERT_DIM_CAP=8", "tele bound --d 3 --p 1"), kInputError);
    EXPECT_EQ(run_binary("QCERT_DIM_CAP=81", "tele bound --d 3 --p 1"), kPass);
}
