#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli_app.hpp"
#include "lorenz_el/errors.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "lorenz-el");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = lorenz::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("lorenz_el_cli_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

// 60 incomes in two states plus one unusable row.
fs::path write_incomes(const TempDir& dir) {
    const fs::path p = dir / "incomes.csv";
    std::ofstream f(p);
    f << "id,state,income\n";
    std::mt19937_64 rng(5);
    std::lognormal_distribution<double> income(10.0, 0.7);
    for (int i = 0; i < 60; ++i) {
        f << i << ',' << (i % 2 == 0 ? "AZ" : "NV") << ",\"" << static_cast<long>(income(rng)) << "\"\n";
    }
    f << "60,AZ,NA\n";
    return p;
}

}  // namespace

TEST_CASE("t lists") {
    using lorenz::cli::parse_t_list;
    CHECK(parse_t_list("0.1,0.5,0.9") == std::vector<double>{0.1, 0.5, 0.9});
    const std::vector<double> range = parse_t_list("0.1..0.9");
    REQUIRE(range.size() == 9);
    CHECK(range[2] == 0.3);
    CHECK(range[8] == 0.9);
    CHECK(parse_t_list("0.25..0.75:0.25") == std::vector<double>{0.25, 0.5, 0.75});
    CHECK(parse_t_list("0.05..0.95:0.05").size() == 19);
    for (const char* bad : {"", "0", "1", "0.5,1.2", "0.9..0.1", "0.1..0.9:0", "a..b", "0.1..0.9:x"}) {
        CAPTURE(bad);
        CHECK_THROWS(parse_t_list(bad));
    }
}

TEST_CASE("ci writes one row per t and method") {
    TempDir dir;
    const fs::path input = write_incomes(dir);
    const Result r = run({"ci", "--input", input.string(), "--value-column", "income"});
    REQUIRE(r.code == 0);
    const std::vector<std::string> rows = lines(r.out);
    REQUIRE(rows.size() == 37);
    CHECK(rows[0] == "t,estimate,method,lower,upper,length");
    CHECK(rows[1].rfind("0.1,", 0) == 0);
    CHECK(rows[1].find(",EL,") != std::string::npos);
    CHECK(rows[4].find(",TAEL,") != std::string::npos);
    CHECK(rows[36].rfind("0.9,", 0) == 0);
    CHECK(r.err.find("dropped 1 row") != std::string::npos);

    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream fields(rows[i]);
        std::string t, est, method, lo, hi, len;
        std::getline(fields, t, ',');
        std::getline(fields, est, ',');
        std::getline(fields, method, ',');
        std::getline(fields, lo, ',');
        std::getline(fields, hi, ',');
        std::getline(fields, len, ',');
        CHECK(std::stod(lo) <= std::stod(est));
        CHECK(std::stod(est) <= std::stod(hi));
        CHECK(std::stod(len) == doctest::Approx(std::stod(hi) - std::stod(lo)).epsilon(1e-3));
    }

    const Result again = run({"ci", "--input", input.string(), "--value-column", "income"});
    CHECK(again.out == r.out);
}

TEST_CASE("ci options") {
    TempDir dir;
    const fs::path input = write_incomes(dir);
    const fs::path out = dir / "ci.csv";
    const Result r = run({"ci", "--input", input.string(), "--value-column", "income", "--group-column",
                          "state", "--group", "AZ", "--t", "0.5", "--methods", "el,tael", "--alpha",
                          "0.1", "--output", out.string(), "--raw"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::vector<std::string> rows = lines(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].find(",EL,") != std::string::npos);
    CHECK(rows[2].find(",TAEL,") != std::string::npos);
    CHECK(rows[1].size() > 40);  // full precision
}

TEST_CASE("ci error exits") {
    TempDir dir;
    const fs::path input = write_incomes(dir);
    const std::string in = input.string();

    const Result unknown = run({"ci", "--input", in, "--value-column", "income", "--methods", "el,xel"});
    CHECK(unknown.code == lorenz::cli::kUsage);
    CHECK(unknown.err.find("lorenz-el: UsageError: unknown method 'xel'") != std::string::npos);

    CHECK(run({"ci", "--input", in, "--value-column", "income", "--t", "1.5"}).code == lorenz::cli::kUsage);
    CHECK(run({"ci", "--input", in, "--value-column", "income", "--alpha", "0"}).code == lorenz::cli::kUsage);
    CHECK(run({"ci", "--input", in}).code == lorenz::cli::kUsage);
    CHECK(run({"bogus"}).code == lorenz::cli::kUsage);
    CHECK(run({}).code == lorenz::cli::kUsage);

    const Result missing = run({"ci", "--input", (dir / "nope.csv").string(), "--value-column", "income"});
    CHECK(missing.code == lorenz::cli::kData);
    CHECK(missing.err.find("FileError") != std::string::npos);

    const Result column = run({"ci", "--input", in, "--value-column", "wage"});
    CHECK(column.code == lorenz::cli::kData);
    CHECK(column.err.find("SchemaError") != std::string::npos);

    const Result group = run({"ci", "--input", in, "--value-column", "income", "--group-column", "state",
                              "--group", "CA"});
    CHECK(group.code == lorenz::cli::kData);

    const fs::path flat = dir / "flat.csv";
    std::ofstream(flat) << "income\n5\n5\n5\n5\n5\n";
    const Result degenerate = run({"ci", "--input", flat.string(), "--value-column", "income", "--t", "0.5"});
    CHECK(degenerate.code == lorenz::cli::kNumerical);
    CHECK(degenerate.err.find("DegenerateVariance") != std::string::npos);
    CHECK(lines(degenerate.err).size() == 1);
}

TEST_CASE("simulate") {
    const std::vector<std::string> args{"simulate", "--population", "chisq:3", "--population", "weibull:1,2",
                                        "--reps", "5", "--n", "25,50,100,150,300,500", "--seed", "11",
                                        "--threads", "1"};
    const Result r = run(args);
    REQUIRE(r.code == 0);
    const std::vector<std::string> rows = lines(r.out);
    REQUIRE(rows.size() == 1 + 2 * 54 * 4);
    CHECK(rows[0] == "population,n,t,method,bias,mse,coverage,mean_length,failures");
    CHECK(rows[1].rfind("\"chisq(3)\",25,0.1,EL,", 0) == 0);
    CHECK(rows.back().rfind("\"weibull(1,2)\",500,0.9,TAEL,", 0) == 0);
    CHECK(!r.err.empty());

    std::vector<std::string> threaded = args;
    threaded.back() = "3";
    CHECK(run(threaded).out == r.out);
    CHECK(run({"simulate", "--population", "lognormal:0,1", "--reps", "5"}).code == lorenz::cli::kUsage);
    CHECK(run({"simulate", "--reps", "0"}).code == lorenz::cli::kUsage);
    CHECK(run({"simulate", "--n", "1", "--reps", "5"}).code == lorenz::cli::kUsage);
}

TEST_CASE("curve") {
    TempDir dir;
    const fs::path input = write_incomes(dir);
    const Result single = run({"curve", "--input", input.string(), "--value-column", "income", "--step", "0.25"});
    REQUIRE(single.code == 0);
    const std::vector<std::string> rows = lines(single.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "t,lorenz,generalized,diagonal");
    CHECK(rows[2].rfind("0.5,", 0) == 0);

    const fs::path out_dir = dir / "curves";
    const Result grouped = run({"curve", "--input", input.string(), "--value-column", "income",
                                "--group-column", "state", "--groups", "AZ,NV,ALL", "--output-dir",
                                out_dir.string()});
    REQUIRE(grouped.code == 0);
    for (const char* g : {"AZ", "NV", "ALL"}) {
        const fs::path p = out_dir / (std::string("curve_") + g + ".csv");
        REQUIRE(fs::exists(p));
        CHECK(lines(slurp(p)).size() == 100);
    }
    CHECK(run({"curve", "--input", input.string(), "--value-column", "income", "--groups", "AZ"}).code ==
          lorenz::cli::kUsage);
}

TEST_CASE("installed binary") {
    TempDir dir;
    const fs::path input = write_incomes(dir);
    const fs::path out = dir / "out.csv";
    const std::string cmd = std::string("\"") + LORENZ_EL_EXE + "\" ci --input \"" + input.string() +
                            "\" --value-column income --t 0.5 --methods el --output \"" + out.string() +
                            "\" 2>/dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(lines(slurp(out)).size() == 2);
    const std::string bad = std::string("\"") + LORENZ_EL_EXE + "\" ci --input \"" + input.string() +
                            "\" --value-column income --methods nope 2>/dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
