#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("MLYAP_CLI");
    REQUIRE_MESSAGE(p != nullptr, "MLYAP_CLI must point at the built binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallConfig = R"([model]
model = ou_quadratic
a = 1
sigma = 1

[mc]
t = 5
n_paths = 2000
n_steps = 250
seed = 4242
p_grid = -0.25 0 0.25

[spectral]
x_max = 6
n = 400
weight = exp_quadratic
gamma = 0.5
tol = 1e-7

[analysis]
s_grid = 0.5 1.0

[output]
formats = csv svg
)";

}  // namespace

TEST_CASE("lambda-mc writes the documented CSV schema and a manifest") {
    const fs::path cfg = write_config("mlyap_cli_a.cfg", kSmallConfig);
    const fs::path out = fs::temp_directory_path() / "mlyap_cli_out_a";
    fs::remove_all(out);
    REQUIRE(run("lambda-mc --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string csv = slurp(out / "lambda_mc.csv");
    CHECK(csv.rfind("p,t,lambda_t,se,dlambda_t,d2lambda_t,ess,n_blowups\n", 0) == 0);
    CHECK(fs::exists(out / "run_manifest.txt"));
    CHECK(fs::exists(out / "lambda_mc.svg"));
    const std::string manifest = slurp(out / "run_manifest.txt");
    CHECK(manifest.find("subcommand = lambda-mc") != std::string::npos);
    CHECK(manifest.find("[model]") != std::string::npos);
}

TEST_CASE("identical config and seed produce byte-identical CSVs across threads") {
    const fs::path cfg = write_config("mlyap_cli_b.cfg", kSmallConfig);
    const fs::path o1 = fs::temp_directory_path() / "mlyap_cli_out_b1";
    const fs::path o2 = fs::temp_directory_path() / "mlyap_cli_out_b2";
    fs::remove_all(o1);
    fs::remove_all(o2);
    REQUIRE(run("lambda-mc --threads 1 --config " + cfg.string() + " --out " + o1.string()) == 0);
    REQUIRE(run("lambda-mc --threads 8 --config " + cfg.string() + " --out " + o2.string()) == 0);
    CHECK(slurp(o1 / "lambda_mc.csv") == slurp(o2 / "lambda_mc.csv"));
}

TEST_CASE("lambda-spectral and rate-function run from the same config") {
    const fs::path cfg = write_config("mlyap_cli_c.cfg", kSmallConfig);
    const fs::path out = fs::temp_directory_path() / "mlyap_cli_out_c";
    fs::remove_all(out);
    REQUIRE(run("lambda-spectral --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(slurp(out / "lambda_spectral.csv")
              .rfind("p,lambda,residual,gap_estimate,n,x_max,weight_params\n", 0) == 0);
    REQUIRE(run("rate-function --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(slurp(out / "rate_function.csv").rfind("s,I,argmax_p,boundary_limited\n", 0) == 0);
}

TEST_CASE("crosscheck prints the sandwich and exits clean") {
    const std::string text = R"([model]
model = pitchfork_q2
a = 0
b = 1
sigma = 1

[mc]
t = 10
n_paths = 4000
n_steps = 1000
seed = 7
p_grid = 10

[spectral]
x_max = 6
n = 400
weight = exp_quadratic
gamma = 1.23
tol = 1e-7
)";
    const fs::path cfg = write_config("mlyap_cli_d.cfg", text);
    const fs::path out = fs::temp_directory_path() / "mlyap_cli_out_d";
    fs::remove_all(out);
    REQUIRE(run("crosscheck --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string csv = slurp(out / "crosscheck.csv");
    CHECK(csv.rfind("p,lambda_mc,se,lambda_spectral,residual,lower,upper\n", 0) == 0);
}

TEST_CASE("config errors exit with code 2") {
    const fs::path bad1 = write_config("mlyap_cli_bad1.cfg", "[mc]\nt = 5\n");  // no [model]
    CHECK(run("lambda-mc --config " + bad1.string()) == 2);
    const fs::path bad2 = write_config("mlyap_cli_bad2.cfg",
                                       "[model]\nmodel = nope\n[mc]\nt = 5\nn_paths = 10\n"
                                       "n_steps = 5\np_grid = 0\n");
    CHECK(run("lambda-mc --config " + bad2.string()) == 2);
    CHECK(run("lambda-mc --config /no/such/file.cfg") == 2);
    CHECK(run("repro not-an-experiment") == 2);
}

TEST_CASE("numerical failures exit with code 3") {
    // All paths blow up: cubic drift started far outside the guard.
    const std::string text = R"([model]
model = custom
drift_coeffs = 0 0 0 1
guard_radius = 5

[mc]
t = 5
n_paths = 50
n_steps = 100
seed = 1
x0 = 4.9
p_grid = 0.5
)";
    const fs::path cfg = write_config("mlyap_cli_e.cfg", text);
    CHECK(run("lambda-mc --config " + cfg.string() + " --out " +
              (fs::temp_directory_path() / "mlyap_cli_out_e").string()) == 3);
}
