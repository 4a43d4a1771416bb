#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dke/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
    std::string err;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::current_path() / "cli_test_output";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Outcome run(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string("'") + DKE_CLI_PATH + "' " + args + " > '" + out.string() + "' 2> '" +
                            err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    o.out = read_file(out);
    o.err = read_file(err);
    return o;
}

std::string preset(const char* name) { return (fs::path(DKE_PRESET_DIR) / (std::string(name) + ".cfg")).string(); }

// Parses a CSV with a header into rows of doubles.
std::vector<std::vector<double>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        rows.push_back(row);
    }
    return rows;
}

bool single_error_line(const std::string& err, const std::string& code) {
    return err.rfind("ERROR " + code + ": ", 0) == 0 && std::count(err.begin(), err.end(), '\n') == 1;
}

}  // namespace

TEST_CASE("verify-basis") {
    SUBCASE("small grid passes") {
        const auto o = run("verify-basis --cells 4 --nmax 4");
        CHECK(o.status == 0);
        CHECK(o.out.find("FAIL") == std::string::npos);
        CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 6);
        CHECK(o.err.empty());
    }
    SUBCASE("corrupted prefactor fails") {
        const auto o = run("verify-basis --cells 4 --nmax 4 --test-corrupt-prefactor 1.01");
        CHECK(o.status == 1);
        CHECK(o.out.find("FAIL") != std::string::npos);
        CHECK(single_error_line(o.err, "CHECK_FAILED"));
    }
    SUBCASE("zero-size grid is a usage error") {
        const auto o = run("verify-basis --cells 0 --nmax 4");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "USAGE"));
    }
    SUBCASE("too many states") {
        const auto o = run("verify-basis --cells 64 --nmax 8");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "USAGE"));
    }
    SUBCASE("missing option") {
        const auto o = run("verify-basis --cells 4");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "USAGE"));
    }
}

TEST_CASE("usage errors") {
    CHECK(run("").status == 2);
    CHECK(single_error_line(run("frobnicate").err, "USAGE"));
    const auto o = run("limit-study --config " + preset("limit_study_base") + " --levels 1");
    CHECK(o.status == 2);
    CHECK(single_error_line(o.err, "USAGE"));
    CHECK(run("--help").status == 0);
}

TEST_CASE("simulate failure paths") {
    const fs::path dir = work_dir();
    SUBCASE("invalid config lists every issue on one line") {
        std::ofstream(dir / "bad.cfg") << "[grid]\nd = -1\nnum_cells = 3\nn_max = 2\n[initial]\nkind = uniform\nn0 = 0\n";
        const auto o = run("simulate --config '" + (dir / "bad.cfg").string() + "'");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "CONFIG"));
        CHECK(o.err.find("line 2: grid.d") != std::string::npos);
        CHECK(o.err.find("line 3: grid.num_cells") != std::string::npos);
    }
    SUBCASE("missing config file") {
        const auto o = run("simulate --config '" + (dir / "nope.cfg").string() + "'");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "IO"));
    }
    SUBCASE("missing rate table") {
        std::ofstream(dir / "table.cfg") << "[grid]\nd = 1\nnum_cells = 2\nn_max = 1\n[initial]\nkind = uniform\n"
                                            "n0 = 0.5\n[collision]\nkind = user_table\nfile = absent.csv\n";
        const auto o = run("simulate --config '" + (dir / "table.cfg").string() + "'");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "IO"));
    }
    SUBCASE("step above the stability bound") {
        std::ofstream(dir / "dt.cfg") << "[grid]\nd = 1\nnum_cells = 4\nn_max = 2\n[initial]\nkind = uniform\n"
                                         "n0 = 0.5\n[integrator]\ndt = 1\nt_end = 2\n";
        const auto o = run("simulate --config '" + (dir / "dt.cfg").string() + "' --output-dir '" +
                           (dir / "dt_out").string() + "'");
        CHECK(o.status == 2);
        CHECK(single_error_line(o.err, "STEP_BOUND"));
    }
    SUBCASE("positivity abort") {
        std::ofstream(dir / "pos.cfg") << "[grid]\nd = 0.5\nnum_cells = 16\nn_max = 1\n[initial]\nkind = gaussian_rk\n"
                                          "center_m = 4\ncenter_n = 1\nsigma_r = 0.2\nsigma_k = 0\n"
                                          "[integrator]\ndt = 0.01\nt_end = 0.1\n";
        const auto o = run("simulate --config '" + (dir / "pos.cfg").string() + "' --output-dir '" +
                           (dir / "pos_out").string() + "'");
        CHECK(o.status == 1);
        CHECK(single_error_line(o.err, "POSITIVITY"));
        CHECK(o.err.find("step 1") != std::string::npos);
    }
}

TEST_CASE("simulate presets") {
    const fs::path dir = work_dir();
    SUBCASE("free streaming conserves the particle number") {
        const auto o = run("simulate --config " + preset("free_streaming") + " --output-dir '" +
                           (dir / "free").string() + "'");
        REQUIRE(o.status == 0);
        const auto diag = read_csv(dir / "free" / "diagnostics.csv");
        REQUIRE(diag.size() == 11);
        for (const auto& row : diag) CHECK(std::abs(row[1] - diag.front()[1]) < 1e-10 * diag.front()[1]);
        CHECK(read_file(dir / "free" / "snapshots.csv").rfind("t,m,n,value\n", 0) == 0);
        const std::string meta = read_file(dir / "free" / "run_meta");
        CHECK(meta.find("steps = 1000") != std::string::npos);
        CHECK(meta.find("dt_bound_transport = ") != std::string::npos);
    }
    SUBCASE("identical configs give byte-identical output") {
        for (const char* p : {"uniform_drift", "relaxation"}) {
            const auto a = run("simulate --config " + preset(p) + " --output-dir '" + (dir / "det_a").string() + "'");
            const auto b = run("simulate --config " + preset(p) + " --output-dir '" + (dir / "det_b").string() + "'");
            REQUIRE(a.status == 0);
            REQUIRE(b.status == 0);
            for (const char* f : {"snapshots.csv", "diagnostics.csv"}) {
                const std::string x = read_file(dir / "det_a" / f);
                CHECK(!x.empty());
                CHECK(x == read_file(dir / "det_b" / f));
            }
        }
    }
    SUBCASE("relaxation reaches Fermi-Dirac") {
        const auto o = run("simulate --config " + preset("relaxation") + " --output-dir '" + (dir / "relax").string() +
                           "'");
        REQUIRE(o.status == 0);
        const auto config = dke::load_config(preset("relaxation"));
        const auto spec = config.grid.spec();
        const auto rows = read_csv(dir / "relax" / "snapshots.csv");
        const double t_final = rows.back()[0];
        dke::DistributionField last(spec);
        for (const auto& r : rows) {
            if (r[0] == t_final) last(static_cast<int>(r[1]), static_cast<int>(r[2])) = r[3];
        }
        double per_cell = 0.0;
        for (double v : last.row(0)) per_cell += v;
        const double T = *config.collision.T;
        const auto fd = dke::fermi_dirac_field(spec, dke::chemical_potential_for(spec, per_cell, T), T);
        CHECK(dke::max_abs_difference(last, fd) < 1e-4);
    }
    SUBCASE("zero-everything config keeps every snapshot equal to the initial state") {
        std::ofstream(dir / "still.cfg") << "[grid]\nd = 1\nnum_cells = 4\nn_max = 2\n[initial]\nkind = uniform\n"
                                            "n0 = 0.375\n[integrator]\ndt = 0.01\nt_end = 0.2\nsnapshot_every = 5\n";
        REQUIRE(run("simulate --config '" + (dir / "still.cfg").string() + "' --output-dir '" +
                    (dir / "still").string() + "'")
                    .status == 0);
        const auto rows = read_csv(dir / "still" / "snapshots.csv");
        CHECK(rows.size() == 5 * 20);
        for (const auto& r : rows) CHECK(r[3] == 0.375);
    }
}

TEST_CASE("limit-study") {
    const fs::path out = work_dir() / "limit";
    const auto o = run("limit-study --config " + preset("limit_study_base") + " --levels 3 --output-dir '" +
                       out.string() + "'");
    REQUIRE(o.status == 0);
    CHECK(read_file(out / "limit_study.csv").rfind("level,d,n_max,defect\n", 0) == 0);
    const auto rows = read_csv(out / "limit_study.csv");
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][3] < rows[i - 1][3]);
        CHECK(rows[i - 1][3] / rows[i][3] >= 2.0);
        CHECK(rows[i][1] == rows[i - 1][1] / 2.0);
        CHECK(rows[i][2] == 2.0 * rows[i - 1][2]);
    }
    const auto wrong = run("limit-study --config " + preset("relaxation") + " --levels 2 --output-dir '" +
                           out.string() + "'");
    CHECK(wrong.status == 2);
    CHECK(single_error_line(wrong.err, "CONFIG"));
}
