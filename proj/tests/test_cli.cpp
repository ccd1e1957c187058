#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "mkzfrac/parallel.hpp"

using namespace mkzfrac;
using namespace mkzfrac::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mkzfrac_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int run(const std::string& cmd, const std::string& text, const fs::path& out, std::string* err = nullptr) {
    std::ostringstream log, e;
    const int rc = run_command(cmd, Config::from_string(text), out, log, e);
    if (err) *err = e.str();
    return rc;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const fs::path other = b / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) return false;
        ++files;
    }
    return files > 0 && files == static_cast<std::size_t>(std::distance(fs::directory_iterator(b), {}));
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("config values") {
    const auto c = Config::from_string(
        "# comment\n"
        "partition = 0, 1/3 2/3 1\n"
        "converge.n = 3..6   # trailing comment\n"
        "solver.direct = false\n"
        "base.q = arctan\n");
    const auto p = c.numbers("partition");
    REQUIRE(p.size() == 4);
    CHECK(p[1] == 1.0 / 3);
    CHECK(c.int_list("converge.n", {}) == std::vector<int>{3, 4, 5, 6});
    CHECK_FALSE(c.flag("solver.direct", true));
    CHECK(c.str("base.q") == "arctan");
    CHECK(c.num("solver.tol", 1e-10) == 1e-10);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(Config::from_string("germ.nme = sin\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("seed 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("seed = x\n").integer("seed", 0), ConfigError);
    CHECK_THROWS_AS(Config::from_string("seed = 1.5\n").integer("seed", 0), ConfigError);
    CHECK_THROWS_AS(parse_number("1/0"), ConfigError);
}

TEST_CASE("zero scaling solve reproduces the germ") {
    const auto out = scratch("zero");
    REQUIRE(run("solve", "germ.name = sin\ngerm.params = 2\npartition.uniform = 3\nalpha.c = 0\n", out) == kOk);
    const std::string germ = slurp(out / "germ.csv"), fractal = slurp(out / "fractal.csv");
    CHECK(!germ.empty());
    CHECK(germ == fractal);
    CHECK(fs::exists(out / "base.csv"));
    CHECK(fs::exists(out / "summary.txt"));
}

TEST_CASE("every plot has a data sibling") {
    const auto out = scratch("plot");
    REQUIRE(run("solve", "germ.name = sinpi\npartition = 0 1/3 2/3 1\nalpha.c = 0.3\ngrid.size = 301\n", out) == kOk);
    const std::string svg = slurp(out / "fractal.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
    std::ifstream csv(out / "fractal.plot.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "series,x,y");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3 * 301);
}

TEST_CASE("exit codes") {
    std::string err;
    CHECK(run("solve", "partition = 0 0.6 0.4 1\n", scratch("e1"), &err) == kConfigError);
    CHECK(err.find("partition") != std::string::npos);
    CHECK(run("solve", "germ.name = nope\n", scratch("e2"), &err) == kConfigError);
    CHECK(err.find("germ.name") != std::string::npos);
    CHECK(run("solve", "alpha.c = 1.2\n", scratch("e3")) == kConfigError);
    CHECK(run("solve", "partition.uniform = 3\ngrid.size = 1001\n", scratch("e4"), &err) == kConfigError);
    CHECK(err.find("grid.size") != std::string::npos);
    CHECK(run("lp", "germ.name = poly\ngerm.params = 0 1\npartition.uniform = 3\nalpha.c = 0.5\nbase.kind = integral\nlp.p = 0.5\n",
              scratch("e5"), &err) == kConfigError);
    CHECK(err.find("p >= 1") != std::string::npos);
    CHECK(run("solve", "partition.uniform = 3\nalpha.c = 0.9\nsolver.direct = false\nsolver.max_iter = 3\n", scratch("e6")) ==
          kNonConvergence);
    CHECK(run("constrain",
              "germ.name = sinpi\ngerm.params = 1\npartition = 0 1/3 2/3 1\nalpha.c = 0.7 -0.9 0.9\nbase.n = 2\n"
              "constrain.mode = positivity\n",
              scratch("e7")) == kValidationFailure);
    CHECK(run("converge", "germ.name = poly\ngerm.params = 0 0 1\npartition.uniform = 3\nalpha.c = 0.3\n"
                          "converge.mode = monotone\nconverge.n = 1..4\n",
              scratch("e8")) == kBoundFailure);
    CHECK(run("bogus", "", scratch("e9")) == kConfigError);
}

TEST_CASE("outputs do not depend on the thread count") {
    const std::string constrain =
        "germ.name = sinpi\ngerm.params = 1\npartition = 0 1/3 2/3 1\nalpha.kind = sigmoid\n"
        "alpha.c = 0.1298 0.1 0.2168\nbase.n = 2\nconstrain.random = 4\nseed = 11\n";
    const std::string dimension =
        "germ.name = sinpi\npartition.uniform = 4\ngrid.size = 1025\nalpha.c = 0.5\nbase.kind = classical\n"
        "base.n = 1\ndimension.levels = 3\ndimension.jmax = 11\n";
    const unsigned saved = thread_count();
    for (const auto& [cmd, text] : {std::pair{"constrain", constrain}, std::pair{"dimension", dimension}}) {
        set_thread_count(1);
        const auto a = scratch(std::string("det1_") + cmd);
        run(cmd, text, a);
        set_thread_count(5);
        const auto b = scratch(std::string("det5_") + cmd);
        run(cmd, text, b);
        CHECK_MESSAGE(same_tree(a, b), cmd);
    }
    set_thread_count(saved);
}

TEST_CASE("seed changes the random samples") {
    const std::string base =
        "germ.name = sinpi\ngerm.params = 1\npartition = 0 1/3 2/3 1\nalpha.c = 0.1\nbase.n = 2\nconstrain.random = 2\n";
    const auto a = scratch("seed1"), b = scratch("seed2");
    run("constrain", base + "seed = 1\n", a);
    run("constrain", base + "seed = 2\n", b);
    CHECK(slurp(a / "random.csv") != slurp(b / "random.csv"));
}
}
