// Exit-code contract and report determinism, exercised through the binary.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string out_path = "morseq_cli_test_out.tmp";
    std::string command = std::string(MORSEQ_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(command.c_str());
    int code = WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::remove(out_path.c_str());
    return {code, buffer.str()};
}

}  // namespace

int main() {
    setenv("MORSEQ_NO_COLOR", "1", 1);

    RunResult list = run("list");
    check(list.exit_code == 0, "list exits 0");
    check(list.output.find("torus") != std::string::npos, "list mentions torus");

    RunResult bold = run("complex torus --variant bold --homology --format json");
    check(bold.exit_code == 0, "complex torus exits 0");
    {
        auto doc = nlohmann::json::parse(bold.output);
        auto h = doc["complexes"][0]["homology"];
        check(h["0"]["betti"] == 1 && h["0"]["torsion"].empty(), "torus H_0 = Z");
        check(h["1"]["betti"] == 2 && h["1"]["torsion"].empty(), "torus H_1 = Z^2");
        check(h["2"]["betti"] == 1 && h["2"]["torsion"].empty(), "torus H_2 = Z");
        check(doc["complexes"][0]["d_squared"]["ok"] == true, "torus d^2 = 0");
    }

    RunResult again = run("complex torus --variant bold --homology --format json");
    check(bold.output == again.output, "identical invocations are byte-identical");

    RunResult klein = run("borel klein --kmax 3 --format json");
    check(klein.exit_code == 0, "borel klein exits 0");
    {
        auto doc = nlohmann::json::parse(klein.output);
        check(doc["borel"]["1"]["betti"] == 1, "klein Borel H_1 betti");
        auto torsion = doc["borel"]["1"]["torsion"];
        check(torsion.size() == 2 && torsion[0] == 2 && torsion[1] == 2,
              "klein Borel H_1 torsion");
    }

    RunResult glue = run("glue-check klein --format json");
    check(glue.exit_code == 0, "glue-check klein exits 0");
    {
        auto doc = nlohmann::json::parse(glue.output);
        check(doc["agreement"] == true, "glue-check agreement");
        check(doc["matches_bold"] == true, "gluing differential equals bold");
    }

    RunResult pairq = run("glue-check genus2 --pair a f --format json");
    check(pairq.exit_code == 0, "glue-check --pair exits 0");
    {
        auto doc = nlohmann::json::parse(pairq.output);
        check(doc["pairs"][0]["signed_count"] == 0, "genus2 a->f signed count 0");
        int gluable = 0;
        for (const auto& chain : doc["pairs"][0]["chains"])
            if (chain["gluable"] == true) ++gluable;
        check(gluable == 4, "genus2 a->f has four gluable chains");
    }

    check(run("validate torus").exit_code == 0, "validate torus exits 0");
    check(run("validate nonexistent.json").exit_code == 2, "missing file exits 2");
    check(run("frobnicate").exit_code == 2, "unknown subcommand exits 2");
    check(run("complex torus --variant nonsuch").exit_code == 2, "bad variant exits 2");

    {
        std::ofstream bad("morseq_cli_bad.json");
        bad << "{\"name\": \"x\", \"kind\": \"closed-equivariant\"";
        bad.close();
        check(run("validate morseq_cli_bad.json").exit_code == 1, "parse failure exits 1");
        std::remove("morseq_cli_bad.json");
    }
    {
        std::ofstream invalid("morseq_cli_invalid.json");
        invalid << R"({"name":"x","kind":"closed-equivariant","points":[
            {"id":"p","index":1,"locus":"fixed","stability":"unstable","phi":"p","sigma":-1},
            {"id":"p","index":1,"locus":"fixed","stability":"unstable","phi":"p","sigma":-1}],
            "trajectories":[]})";
        invalid.close();
        check(run("validate morseq_cli_invalid.json").exit_code == 1, "duplicate id exits 1");
        std::remove("morseq_cli_invalid.json");
    }

    RunResult text = run("complex klein --variant bold --homology --format text");
    check(text.exit_code == 0, "text format exits 0");
    check(text.output.find("H_1") != std::string::npos, "text format prints homology");

    if (failures == 0) std::cout << "cli: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
