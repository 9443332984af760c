// Copyright 2026 The Telegate Authors
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

#include <sys/wait.h>

#include <catch_amalgamated.hpp>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + TELEGATE_CLI_PATH + " " + args + " 2>&1";
    Run r;
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool has(const Run &r, const std::string &needle) { return r.out.find(needle) != std::string::npos; }

/// Fresh scratch directory per test case.
fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("telegate-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json load(const fs::path &p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

void save(const fs::path &p, const nlohmann::json &j) { std::ofstream(p) << j.dump(1); }

}  // namespace

TEST_CASE("cli hierarchy", "[cli]") {
    auto r = run("hierarchy T");
    CHECK(r.code == 0);
    CHECK(has(r, "level 3"));
    r = run("hierarchy CNOT");
    CHECK(r.code == 0);
    CHECK(has(r, "level 2"));
    r = run("hierarchy --k-max 2 TOFFOLI");
    CHECK(has(r, "exceeds k_max 2"));
    r = run("hierarchy CNOT*Q@1");
    CHECK(r.code == 0);
    CHECK(has(r, "level 2"));
    CHECK(run("hierarchy /nonexistent/gate.json").code == 2);
    CHECK(run("no-such-command").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("cli synth and verify", "[cli]") {
    const auto dir = scratch("synth");
    const auto file = dir / "t.json";
    auto r = run("synth T --out " + file.string());
    REQUIRE(r.code == 0);
    CHECK(has(r, "S·X"));
    CHECK(has(r, "0.707107-0.707107i"));
    REQUIRE(fs::exists(file));
    CHECK(fs::exists(dir / "t.json.report.json"));

    r = run("verify " + file.string() + " --against T");
    CHECK(r.code == 0);
    CHECK(has(r, "pass: 2 branches"));
    CHECK(run("verify " + file.string() + " --against S").code == 1);

    SECTION("correction on the wrong outcome fails") {
        auto j = load(file);
        for (auto &op : j["ops"]) {
            if (op.contains("cond")) op["cond"]["equals"] = {0};
        }
        save(dir / "bad.json", j);
        r = run("verify " + (dir / "bad.json").string() + " --against T");
        CHECK(r.code == 1);
    }

    SECTION("tolerance comes from --tol, then TELEGATE_TOL") {
        auto j = load(file);
        auto &amp = j["ops"][0]["state"]["amplitudes"][1];
        const auto z = std::complex<double>(amp[0], amp[1]) * std::polar(1.0, 0.01);
        amp = {z.real(), z.imag()};
        const auto bent = (dir / "bent.json").string();
        save(dir / "bent.json", j);
        CHECK(run("verify " + bent + " --against T").code == 1);
        CHECK(run("verify " + bent + " --against T", "TELEGATE_TOL=1e-3").code == 0);
        CHECK(run("--tol 1e-12 verify " + bent + " --against T", "TELEGATE_TOL=1e-3").code == 1);
        CHECK(run("verify " + bent + " --against T", "TELEGATE_TOL=nope").code == 2);
    }
}

TEST_CASE("cli synth examples", "[cli]") {
    const auto dir = scratch("examples");
    auto r = run("synth TOFFOLI --out " + (dir / "tof.json").string());
    CHECK(r.code == 0);
    CHECK(has(r, "plan X,X,Z"));
    CHECK(has(r, "X₁⊗CNOT₂₃"));
    CHECK(has(r, "Z₃⊗CZ₁₂"));
    r = run("synth CS --out " + (dir / "cs.json").string());
    CHECK(r.code == 0);
    CHECK(has(r, "(X⊗S)·CZ"));
    r = run("synth CH --out " + (dir / "ch.json").string());
    CHECK(r.code == 1);
    CHECK(has(r, "refused"));
    r = run("synth CH --sandwich 'Q†@1,T@0*CS†,CNOT*Q@1' --out " + (dir / "chs.json").string());
    CHECK(r.code == 0);
    CHECK(has(r, "4 branches"));
}

TEST_CASE("cli ancilla", "[cli]") {
    auto r = run("ancilla CS");
    CHECK(r.code == 0);
    CHECK(has(r, "(0.5i)|11⟩"));
    r = run("ancilla TOFFOLI --shortcut 1 --simulate");
    CHECK(r.code == 0);
    CHECK(has(r, "|0⟩|+⟩|0⟩"));
    CHECK(has(r, "all branches reach the target"));
    r = run("ancilla T --simulate");
    CHECK(r.code == 0);
    CHECK(has(r, "worst fidelity 1"));
}

TEST_CASE("cli recursive", "[cli]") {
    auto r = run("recursive V --k 4");
    CHECK(r.code == 0);
    CHECK(has(r, "depth-2 tree"));
    CHECK(has(r, "measurements 2"));
    r = run("recursive CV --k 3");
    CHECK(r.code == 0);
    CHECK(has(r, "depth-1 tree"));
    r = run("recursive T --k 3 --flatten");
    CHECK(r.code == 0);
    CHECK(has(r, "flattened"));
    CHECK(run("recursive CNOT").code != 0);
}

TEST_CASE("cli remote", "[cli]") {
    auto r = run("remote --protocol remote-cnot");
    CHECK(r.code == 0);
    CHECK(has(r, "1 ebit, 2 cbits"));
    CHECK(has(r, "all branches pass"));
    r = run("remote --protocol remote-cnot-4step");
    CHECK(r.code == 0);
    CHECK(has(r, "2 ebits, 4 cbits"));
    const auto dir = scratch("remote");
    r = run("remote --protocol teleport2-xz --trace " + (dir / "trace.json").string() + " --layout " +
            (dir / "layout.json").string());
    CHECK(r.code == 0);
    CHECK(load(dir / "trace.json").contains("steps"));
    CHECK(load(dir / "layout.json").is_object());
    CHECK(run("remote --protocol nope").code == 2);
}
