#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "stabkit/cli.hpp"

using namespace stabkit;

namespace {

struct CliRun {
    int exit_code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) {
        path = std::string("cli_test_") + name;
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("we-brute and we-extract agree on the repetition code") {
    TempFile g("rep3.txt", "111\n");
    CliRun brute = run({"we-brute", "--code", g.path});
    CHECK(brute.exit_code == 0);
    CHECK(brute.out == "1,0,0,1\n");

    CliRun extract = run({"we-extract", "--code", g.path, "--verify"});
    CHECK(extract.exit_code == 0);
    CHECK(extract.out == "1,0,0,1\n");
}

TEST_CASE("we-extract writes a transcript") {
    TempFile g("id2.txt", "10\n01\n");
    TempFile trace("trace.json", "");
    CliRun extract = run({"we-extract", "--code", g.path, "--trace", trace.path});
    CHECK(extract.exit_code == 0);
    CHECK(extract.out == "1,2,1\n");
    std::ifstream tf(trace.path);
    nlohmann::json j = nlohmann::json::parse(tf);
    CHECK(j["padded"] == true);
    CHECK(j["crossings"].size() >= 7);
}

TEST_CASE("decode subcommand") {
    TempFile code("bitflip.txt", "3 1\nZZI\nIZZ\n");

    CliRun res = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "10"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("winner 0|0") != std::string::npos);

    CliRun js = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "10",
                     "--format", "json"});
    CHECK(js.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(js.out);
    CHECK(j["winner"] == "0|0");
    CHECK(j["classes"].size() == 4);
    for (const auto& c : j["classes"]) {
        std::string prob = c["prob"].get<std::string>();
        CHECK(prob.find('/') != std::string::npos);
    }

    CliRun q = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "10",
                    "--method", "qmld"});
    CHECK(q.exit_code == 0);
    CHECK(q.out.find("error XII") != std::string::npos);

    CliRun bad = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "101"});
    CHECK(bad.exit_code == 2);
}

TEST_CASE("enumerate subcommand") {
    StabilizerCode shor = fixtures::shor9();
    TempFile code("shor.txt", format_code_text(shor));
    CliRun res = run({"enumerate", "--code", code.path, "--syndrome", "00000000", "--label", "0|0"});
    CHECK(res.exit_code == 0);
    std::size_t commas = 0;
    Integer total = 0;
    std::string field;
    for (char ch : res.out) {
        if (ch == ',' || ch == '\n') {
            total += Integer(field);
            field.clear();
            commas += ch == ',';
        } else {
            field += ch;
        }
    }
    CHECK(commas == 18);  // 2n+1 CSV fields
    CHECK(total == 256);
    CHECK(res.out.rfind("1,", 0) == 0);  // A_0 = 1
}

TEST_CASE("compare subcommand finds no disagreement at tiny noise") {
    TempFile code("bitflip.txt", "3 1\nZZI\nIZZ\n");
    CliRun res = run({"compare", "--code", code.path, "--p-grid", "1/64,1/32"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("disagreements,0") != std::string::npos);

    CliRun bad = run({"compare", "--code", code.path, "--p-grid", ""});
    CHECK(bad.exit_code == 2);
}

TEST_CASE("compare subcommand sees the degeneracy threshold on the Y-chain code") {
    StabilizerCode chain = fixtures::y_chain(3);
    TempFile code("ychain.txt", format_code_text(chain));
    // threshold at t^3 = 1/4: 5/8 sits below, 9/10 above
    CliRun res = run({"compare", "--code", code.path, "--kind", "yfree", "--p-grid", "5/8,9/10"});
    CHECK(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    std::size_t below = 0, above = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("5/8,00", 0) == 0 && line.find(",no") != std::string::npos) ++below;
        if (line.rfind("9/10,00", 0) == 0 && line.find(",no") != std::string::npos) ++above;
    }
    CHECK(below == 0);
    CHECK(above == 1);
}

TEST_CASE("shor-validate subcommand") {
    CliRun res = run({"shor-validate", "--n1", "2", "--n2", "3", "--p", "1/4", "--ell", "1"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("brute_force_match yes") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"nonsense"}).exit_code == 2);
    CHECK(run({}).exit_code == 2);
    CHECK(run({"we-brute"}).exit_code == 2);                       // missing --code
    CHECK(run({"we-brute", "--code", "missing_file"}).exit_code == 2);
}

TEST_CASE("decode accepts a channel JSON file and csv output") {
    TempFile code("bitflip.txt", "3 1\nZZI\nIZZ\n");
    PauliChannel ch = compose({independent_xz(2, Rational(1, 8)), z_only(Rational(1, 3))});
    TempFile chan("chan.json", channel_to_json(ch).dump());
    CliRun res = run({"decode", "--code", code.path, "--channel", chan.path, "--syndrome", "00",
                      "--format", "csv"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("label,prob\n", 0) == 0);
    CHECK(res.out.find("0|0,") != std::string::npos);
}

TEST_CASE("STABKIT_MAX_ENUM overrides the exhaustive limits") {
    TempFile g("hamming.txt", "1000110\n0100101\n0010011\n0001111\n");
    setenv("STABKIT_MAX_ENUM", "2", 1);
    CliRun res = run({"we-brute", "--code", g.path});
    unsetenv("STABKIT_MAX_ENUM");
    CHECK(res.exit_code == 3);  // 2^4 codewords exceed the forced cap
    CHECK(run({"we-brute", "--code", g.path}).exit_code == 0);
}

TEST_CASE("cli output is byte stable") {
    TempFile g("rep3.txt", "111\n");
    CliRun a = run({"we-extract", "--code", g.path});
    CliRun b = run({"we-extract", "--code", g.path});
    CHECK(a.out == b.out);

    TempFile code("bitflip.txt", "3 1\nZZI\nIZZ\n");
    CliRun c = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "11",
                    "--format", "json"});
    CliRun d = run({"decode", "--code", code.path, "--channel", "xz:p=1/8", "--syndrome", "11",
                    "--format", "json"});
    CHECK(c.out == d.out);
}
