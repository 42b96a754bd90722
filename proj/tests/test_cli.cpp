/*
   Copyright 2026 The etcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kBin = ETCSIM_BIN;
const fs::path kConfigs = ETCSIM_CONFIG_DIR;
const fs::path kScratch = ETCSIM_SCRATCH_DIR;

int run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " \"" + kBin + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const auto p = kScratch / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string cfg(const std::string& name)
{
    return "\"" + (kConfigs / name).string() + "\"";
}

fs::path edited_config(const std::string& base, const std::string& from, const std::string& to,
                       const std::string& name)
{
    std::string text = slurp(kConfigs / base);
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    const auto p = scratch("configs") / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string csv_value(const std::string& csv, const std::string& key)
{
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + ",", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
}

std::vector<std::vector<std::string>> rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

}  // namespace

TEST_CASE("certify")
{
    const auto out = scratch("certify_scalar");
    CHECK(run("certify --config " + cfg("scalar_certify.ini") + " --out \"" + out.string() + "\"") == 0);
    const auto csv = slurp(out / "certify.csv");
    CHECK(csv.rfind("key,value\n", 0) == 0);
    CHECK(std::stod(csv_value(csv, "B_star")) == doctest::Approx(12.92).epsilon(0.01 / 12.92));
    CHECK(csv_value(csv, "feasible") == "true");
    CHECK(csv_value(csv, "Bcal") == "2");
    CHECK(csv_value(csv, "T_max") == "1");
    CHECK(csv.find('\r') == std::string::npos);

    const auto vout = scratch("certify_vector");
    CHECK(run("certify --config " + cfg("vector_certify.ini") + " --out \"" + vout.string() + "\"") == 0);
    const auto vcsv = slurp(vout / "certify.csv");
    CHECK(std::stod(csv_value(vcsv, "B_star")) == doctest::Approx(2.44).epsilon(0.01 / 2.44));
    CHECK(csv_value(vcsv, "feasible") == "true");
    CHECK(csv_value(vcsv, "fraction_bound") == "none");

    const auto low = edited_config("scalar_certify.ini", "B = 15.5", "B = 9", "low_B.ini");
    CHECK(run("certify --config \"" + low.string() + "\" --out \"" + scratch("low").string() + "\"") == 2);
}

TEST_CASE("invalid input exits with 1")
{
    const auto bad = edited_config("scalar_certify.ini", "M = 1", "M = 1\nbogus = 3", "bad_key.ini");
    CHECK(run("certify --config \"" + bad.string() + "\"") == 1);
    CHECK(run("simulate --config \"" + bad.string() + "\"") == 1);
    CHECK(run("certify --config /nonexistent/file.ini") == 1);
    CHECK(run("frobnicate") == 1);

    const auto lossy = edited_config("scalar_certify.ini", "p = 0.6", "p = 0.05", "lossy.ini");
    CHECK(run("validate --config \"" + lossy.string() + "\"") == 1);
    CHECK(run("certify --config \"" + lossy.string() + "\"") == 1);
    CHECK(run("simulate --config \"" + lossy.string() + "\" --out \"" + scratch("lossy").string() + "\"") == 1);
}

TEST_CASE("validate")
{
    CHECK(run("validate --config " + cfg("scalar_certify.ini") + " --level quick") == 0);
    CHECK(run("validate --config " + cfg("scalar_certify.ini") + " --level full") == 0);
    CHECK(run("validate --config " + cfg("vector_certify.ini") + " --level full") == 0);
    CHECK(run("validate --config " + cfg("scalar_certify.ini") + " --level extreme") == 1);
    // Between B_c and B* the H sweep is informational, so the suite still passes;
    // a B below B* cannot make the required checks fail.
    const auto mid = edited_config("scalar_certify.ini", "B = 15.5", "B = 10", "mid_B.ini");
    CHECK(run("validate --config \"" + mid.string() + "\" --level full") == 0);
}

TEST_CASE("simulate is byte-stable and independent of the thread cap")
{
    const auto a = scratch("sim_a");
    const auto b = scratch("sim_b");
    CHECK(run("simulate --config " + cfg("fig2_event_D1.ini") + " --out \"" + a.string() + "\"") == 0);
    CHECK(run("simulate --config " + cfg("fig2_event_D1.ini") + " --out \"" + b.string() + "\"",
              "ETCSIM_THREADS=1") == 0);
    const auto ea = slurp(a / "ensemble.csv");
    CHECK(ea.rfind("k,mean_x2,bound,frac,mean_h\n", 0) == 0);
    CHECK(ea == slurp(b / "ensemble.csv"));
    CHECK_FALSE(fs::exists(a / "trajectory.csv"));
    CHECK(rows(ea).size() == 302);
}

TEST_CASE("single-run simulate writes the trajectory")
{
    const auto out = scratch("sim_traj");
    CHECK(run("simulate --config " + cfg("fig5_trajectory.ini") + " --out \"" + out.string() + "\"") == 0);
    const auto t = rows(slurp(out / "trajectory.csv"));
    REQUIRE(t.size() == 302);
    CHECK(t[0] == std::vector<std::string>{"k", "x", "t", "r", "h", "G"});
    CHECK(t[1][2] == "1");
    CHECK(t[1][3] == "1");
}

TEST_CASE("every shipped figure config simulates and names its figure")
{
    for (const auto& entry : fs::directory_iterator(kConfigs)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("fig", 0) != 0) continue;
        CAPTURE(name);
        const auto first = slurp(entry.path()).substr(0, 40);
        CHECK(first.find("# Figure") == 0);
        CHECK(run("simulate --config \"" + entry.path().string() + "\" --out \"" +
                  scratch("figs/" + name).string() + "\"") == 0);
    }
}

TEST_CASE("sweep")
{
    const auto out = scratch("sweep_p");
    CHECK(run("sweep --config " + cfg("fig2_event_D1.ini") + " --param channel.p --values 0.6,1.0 --out \"" +
              out.string() + "\"") == 0);
    const auto s = rows(slurp(out / "summary.csv"));
    REQUIRE(s.size() == 3);
    CHECK(s[0][0] == "index");
    CHECK(fs::exists(out / "ensemble_0.csv"));
    CHECK(fs::exists(out / "ensemble_1.csv"));
    CHECK(s[1][2] != s[2][2]);  // distinct seeds
    CHECK(std::stod(s[2][3]) < std::stod(s[1][3]));

    const auto outD = scratch("sweep_D");
    CHECK(run("sweep --config " + cfg("fig2_event_D1.ini") + " --param spec.D --values 1,3 --out \"" +
              outD.string() + "\"") == 0);
    const auto d = rows(slurp(outD / "summary.csv"));
    REQUIRE(d.size() == 3);
    CHECK(std::stod(d[2][3]) >= std::stod(d[1][3]));

    CHECK(run("sweep --config " + cfg("fig2_event_D1.ini") + " --param channel.q --values 1 --out \"" +
              scratch("sweep_bad").string() + "\"") == 1);

    const auto one = scratch("sweep_one");
    const auto sim = scratch("sweep_sim");
    CHECK(run("sweep --config " + cfg("fig2_event_D1.ini") + " --param spec.B --values 15.5 --out \"" +
              one.string() + "\"") == 0);
    CHECK(run("simulate --config " + cfg("fig2_event_D1.ini") + " --out \"" + sim.string() + "\"") == 0);
    CHECK(slurp(one / "ensemble_0.csv") == slurp(sim / "ensemble.csv"));
}
