#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto dir = fs::temp_directory_path();
    const auto out = dir / ("cli_out_" + std::to_string(counter) + ".txt");
    const auto err = dir / ("cli_err_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(CASIMIR_LAB_BIN) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line.front() != '#')
            lines.push_back(line);
    return lines;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path.string();
}

// a fast two-separation variant of the shipped experiment
std::string small_experiment() {
    return write_temp("cli_experiment.cfg", R"([experiment]
sphere_radius_um = 98.9
temperature = 300
separations_nm = 100, 300
sphere = au
plate_dark = si_dark
plate_bright = si_bright
bright_carriers = 4.2e25

[material au]
core = oscillators
osc.1.strength = 5.9
osc.1.frequency = 4.5e15
drude.1.wp = 1.37e16
drude.1.gamma = 5.3e13
carrier.law = constant
carrier.n_ref = 5.9e28

[material si_dark]
core = constant
eps0 = 11.67
carrier.law = constant
carrier.n_ref = 5e20
carrier.mobility = 0.045

[material si_bright]
core = constant
eps0 = 11.67
plasma.1.wp = 5.07e14
plasma.2.wp = 4.161e14
)");
}

} // namespace

TEST_CASE("cd-table output") {
    const auto r = run_cli("cd-table");
    CHECK(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 9); // header + 8 defaults
    CHECK(rows[0] == "eps0,cd");
    // eps0 = 3.81 row
    double eps = 0.0, cd = 0.0;
    bool found = false;
    for (size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        char comma;
        row >> eps >> comma >> cd;
        if (eps == 3.81) {
            found = true;
            CHECK(cd == doctest::Approx(2.70084355116920553).epsilon(1e-12));
        }
    }
    CHECK(found);
    // manifest present, wall time only on stderr
    CHECK(r.out.find("# casimir-lab cd-table") != std::string::npos);
    CHECK(r.out.find("# constants:") != std::string::npos);
    CHECK(r.out.find("wall") == std::string::npos);
    CHECK(r.err.find("# wall:") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
    const std::string cfgdir = CASIMIR_CONFIG_DIR;
    const auto a = run_cli("cd-table --eps 2,11.67");
    const auto b = run_cli("cd-table --eps 2,11.67");
    CHECK(a.out == b.out);

    const std::string sweep_args = "sweep --config " + cfgdir +
                                   "/sio2_plate.cfg --grid 150:300:3 "
                                   "--temperature 300";
    const auto c = run_cli(sweep_args);
    const auto d = run_cli(sweep_args);
    CHECK(c.code == 0);
    CHECK(c.out == d.out);
    CHECK(data_lines(c.out).size() == 4); // header + 3 rows
}

TEST_CASE("sweep writes to a file with the same payload") {
    const std::string cfgdir = CASIMIR_CONFIG_DIR;
    const auto outfile = fs::temp_directory_path() / "sweep_out.csv";
    const std::string base = "sweep --config " + cfgdir +
                             "/si_plate.cfg --grid 200:200:1 --policy screened";
    const auto direct = run_cli(base);
    const auto filed = run_cli(base + " --out " + outfile.string());
    CHECK(filed.code == 0);
    CHECK(filed.out.empty());
    // payload rows agree (the manifests record different command lines)
    CHECK(data_lines(direct.out) == data_lines(slurp(outfile)));
    const auto rows = data_lines(direct.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].substr(0, 4) == "200,");
}

TEST_CASE("config lookup through the environment directory") {
    setenv("CASIMIR_LAB_CONFIG_DIR", CASIMIR_CONFIG_DIR, 1);
    const auto r = run_cli("sweep --config sio2_plate.cfg --grid 200:200:1");
    CHECK(r.code == 0);
    unsetenv("CASIMIR_LAB_CONFIG_DIR");
}

TEST_CASE("nernst verdict json") {
    const std::string cfgdir = CASIMIR_CONFIG_DIR;
    const auto r = run_cli("nernst --config " + cfgdir +
                           "/sio2_plate.cfg --policy neglect-dc "
                           "--separation-nm 200 --tmin 1e-3 --tmax 1e-1 "
                           "--tpoints 8");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"classification\": \"consistent\"") !=
          std::string::npos);
    CHECK(r.out.find("\"fnv1a\"") != std::string::npos);
    const auto pos = r.out.find("\"exponent\": ");
    REQUIRE(pos != std::string::npos);
    const double expo = std::stod(r.out.substr(pos + 12));
    CHECK(expo > 2.8);
    CHECK(expo < 3.2);

    const auto v = run_cli("nernst --config " + cfgdir +
                           "/si_plate.cfg --policy include-dc "
                           "--separation-nm 200 --tmin 1e-3 --tmax 1e-1 "
                           "--tpoints 8");
    CHECK(v.code == 0);
    CHECK(v.out.find("\"classification\": \"violating\"") !=
          std::string::npos);
    CHECK(v.out.find("\"exponent\": null") != std::string::npos);
}

TEST_CASE("diff-force and au-check") {
    const auto cfg = small_experiment();
    const auto r = run_cli("diff-force --config " + cfg + " --tol 1e-8");
    CHECK(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "separation_nm,force_dark_pN,force_bright_pN,delta_pN");
    // both rows: negative forces, positive delta, smaller at larger gap
    double d1 = 0.0, d2 = 0.0;
    {
        std::istringstream row(rows[1]);
        double nm, fd, fb;
        char c;
        row >> nm >> c >> fd >> c >> fb >> c >> d1;
        // nm -> m -> nm round trip is only ulp-exact
        CHECK(std::abs(nm - 100.0) < 1e-9);
        CHECK(fd < 0.0);
        CHECK(fb < fd); // stronger attraction in the bright phase
        CHECK(d1 > 0.0);
    }
    {
        std::istringstream row(rows[2]);
        double nm, fd, fb;
        char c;
        row >> nm >> c >> fd >> c >> fb >> c >> d2;
        CHECK(std::abs(nm - 300.0) < 1e-9);
        CHECK(d2 > 0.0);
        CHECK(d2 < d1);
    }

    const auto s = run_cli("diff-force --config " + cfg +
                           " --policy screened --tol 1e-8");
    CHECK(s.code == 0);
    CHECK(data_lines(s.out).size() == 3);

    const auto au = run_cli("au-check --config " + cfg + " --tol 1e-8");
    CHECK(au.code == 0);
    CHECK(au.out.find("\"max_relative_deviation\":") != std::string::npos);
    const auto pos = au.out.find("max_relative_deviation\": ");
    const double dev = std::stod(au.out.substr(pos + 24));
    CHECK(dev >= 0.0);
    CHECK(dev < 1e-5);
}

TEST_CASE("exit codes") {
    // usage / config problems -> 2
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("no-such-command").code == 2);
    CHECK(run_cli("sweep --grid 100:200:2").code == 2); // --config required
    CHECK(run_cli("sweep --config /nonexistent.cfg --grid 100:200:2").code ==
          2);
    const std::string cfgdir = CASIMIR_CONFIG_DIR;
    CHECK(run_cli("sweep --config " + cfgdir +
                  "/sio2_plate.cfg --grid 100:200:2 --policy bogus")
              .code == 2);
    CHECK(run_cli("sweep --config " + cfgdir +
                  "/sio2_plate.cfg --grid backwards")
              .code == 2);
    CHECK(run_cli("nernst --config " + cfgdir +
                  "/sio2_plate.cfg --tmin 1e-3 --tmax 1e-2 --tpoints 8")
              .code == 2); // grid spans one decade only

    // domain problems -> 3
    CHECK(run_cli("cd-table --eps 0.5").code == 3);

    // --help is not an error
    CHECK(run_cli("--help").code == 0);

    // a malformed config names the offending key on stderr
    const auto bad = write_temp("cli_bad.cfg", R"([material junk]
core = constant
eps0 = banana

[atom a]
alpha0 = 1e-30
beta = 0
)");
    const auto r = run_cli("sweep --config " + bad + " --grid 100:200:2");
    CHECK(r.code == 2);
    CHECK(r.err.find("eps0") != std::string::npos);
    CHECK(r.err.find("cli_bad.cfg:3") != std::string::npos);
}
