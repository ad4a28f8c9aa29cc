#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string("\"") + SINGLIM_EXE + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
    const fs::path dir = fs::path("cli_work");
    fs::create_directories(dir);
    const fs::path p = dir / (name + ".json");
    std::ofstream(p) << j.dump(2);
    return p;
}

nlohmann::json base(const nlohmann::json& u1) {
    return {{"schema", "singlim.config/v1"},
            {"problems",
             {{{"name", "p"}, {"spectrum", {{"preset", "single-mode"}}}, {"u0", {{"values", {1.0}}}}, {"u1", u1}}}},
            {"epsilons", {1e-2, 1e-3, 1e-4}},
            {"checks", {"identities", "inequalities"}}};
}

}  // namespace

TEST_CASE("presets listing") {
    const Run r = run("presets");
    CHECK(r.code == 0);
    CHECK(r.out.find("dirichlet-32") != std::string::npos);
    CHECK(r.out.find("9.8696044") != std::string::npos);
    CHECK(r.out.find("il0") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("verify").code == 2);
    CHECK(run("verify --config cli_work/missing.json").code == 2);
    auto j = base({{"values", {0.0}}});
    j["epsilons"] = {0.0};
    CHECK(run("verify --config " + write_config("bad_eps", j).string()).code == 2);
    // simulate without an output directory
    CHECK(run("simulate --config " + write_config("no_out", base({{"values", {0.0}}})).string()).code == 2);
}

TEST_CASE("unwritable output exits 3") {
    const fs::path cfg = write_config("io", base({{"values", {0.0}}}));
    CHECK(run("simulate --config " + cfg.string() + " --out /proc/singlim").code == 3);
}

TEST_CASE("verify prints a report") {
    const fs::path cfg = write_config("verify", base({{"values", {0.0}}}));
    const Run r = run("verify --config " + cfg.string());
    CHECK(r.code == 0);
    const auto report = nlohmann::json::parse(r.out);
    REQUIRE(report.is_array());
    CHECK(report.size() > 30);
    for (const auto& item : report) CHECK(item["pass"] == true);

    auto strict = base({{"values", {0.7}}});
    strict["problems"][0]["spectrum"] = {{"eigenvalues", {1.0, 3.0}}};
    strict["problems"][0]["u0"] = {{"values", {1.0, 0.5}}};
    strict["problems"][0]["u1"] = {{"values", {0.7, -0.2}}};
    strict["tolerances"] = {{"superposition", 1e-20}};
    CHECK(run("verify --config " + write_config("strict", strict).string()).code == 1);
}

TEST_CASE("precondition failure exits 1") {
    auto j = base({{"values", {0.0}}});
    j["comparisons"] = {"cor2"};
    const Run r = run("rates --config " + write_config("cor2", j).string() + " --out cli_work/cor2_out");
    CHECK(r.code == 1);
}

TEST_CASE("synthetic rates recover the injected exponent") {
    auto j = base({{"values", {0.0}}});
    j["comparisons"] = {"synthetic"};
    j["synthetic_exponent"] = 2.0;
    const fs::path out = "cli_work/synthetic_out";
    const Run r = run("rates --config " + write_config("synthetic", j).string() + " --out " + out.string());
    CHECK(r.code == 0);
    const auto fit = nlohmann::json::parse(read_file(out / "rates_synthetic.json"));
    CHECK(fit["slope"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit["pass"] == true);
    CHECK(read_file(out / "rates_synthetic.csv").rfind("epsilon,error\n", 0) == 0);
    CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("zero data simulates to zero errors") {
    auto j = base({{"values", {0.0}}});
    j["problems"][0]["spectrum"] = {{"preset", "three-mode"}};
    j["problems"][0]["u0"] = {{"values", {0.0, 0.0, 0.0}}};
    j["problems"][0]["u1"] = {{"values", {0.0, 0.0, 0.0}}};
    const fs::path out = "cli_work/zero_out";
    CHECK(run("simulate --config " + write_config("zero", j).string() + " --out " + out.string()).code == 0);
    std::istringstream csv(read_file(out / "trajectory_eps0.001.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,norm_u,norm_v,norm_theta,err_order0,err_theta,err_order2");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string f;
        std::getline(fields, f, ',');
        while (std::getline(fields, f, ',')) CHECK(std::stod(f) == 0.0);
    }
    CHECK(rows > 2000);
}
