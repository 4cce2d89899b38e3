#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support/schema_check.hpp"
#include "varjet/cli.hpp"
#include "varjet/modelfile.hpp"

using namespace varjet;
using nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

json load_schema(const char* name) {
    std::ifstream in(std::string(VARJET_DOCS_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

std::string write_temp_model(const std::string& content, const std::string& tag) {
    const std::string path = "varjet_test_model_" + tag + ".json";
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kBadFieldModel = R"({
  "name": "laplace-with-bad-field",
  "dimension": 1,
  "fields": [{"name": "u", "kind": "scalar"}],
  "expressions": {"L": "1/2*u[;1]^2", "V": "u[]"},
  "lagrangian": "L",
  "vectorfields": {"bad": {"u": "V"}}
})";

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("el prints the canonical source") {
    const RunResult r = run({"el", "--builtin", "laplace-1d"});
    CHECK(r.code == 0);
    CHECK(r.out == "T[u] = -u[;1,1]\n");
}

TEST_CASE("el works from a model file") {
    const RunResult r =
        run({"el", "--model", std::string(VARJET_DOCS_DIR) + "/models/laplace-1d.json"});
    CHECK(r.code == 0);
    CHECK(r.out == "T[u] = -u[;1,1]\n");
}

TEST_CASE("current prints the hand-derived translation current") {
    const RunResult r =
        run({"current", "--builtin", "laplace-1d", "--field", "translation"});
    CHECK(r.code == 0);
    CHECK(r.out == "omega[1] = -1/2*u[;1]^2\n");
}

TEST_CASE("verdict commands use exit code 1 for false") {
    CHECK(run({"symmetry", "--builtin", "laplace-1d", "--field", "translation"}).code == 0);
    CHECK(run({"check-variational", "--builtin", "laplace-1d"}).code == 0);
    CHECK(run({"null", "--builtin", "laplace-1d"}).code == 1);
    CHECK(run({"check-natural", "--builtin", "laplace-1d"}).code == 1);
    CHECK(run({"check-natural", "--builtin", "laplace-1d"}).out == "natural: false\n");
}

TEST_CASE("input errors use exit code 2") {
    CHECK(run({"el", "--builtin", "no-such-model"}).code == 2);
    CHECK(run({"el"}).code == 2);
    CHECK(run({"el", "--model", "does-not-exist.json"}).code == 2);
    CHECK(run({"symmetry", "--builtin", "laplace-1d", "--field", "nope"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);

    const std::string bad = write_temp_model(
        R"({"dimension": 1, "fields": [{"name": "u", "kind": "scalar"}],
            "expressions": {"L": "1/2*w[;1]^2"}, "lagrangian": "L"})",
        "badgrammar");
    const RunResult r = run({"el", "--model", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown field") != std::string::npos);
    std::remove(bad.c_str());
}

TEST_CASE("undecidable requests use exit code 3") {
    const std::string path = write_temp_model(kBadFieldModel, "badfield");
    const RunResult r = run({"current", "--model", path, "--field", "bad"});
    CHECK(r.code == 3);
    CHECK(r.err.find("residual") != std::string::npos);
    std::remove(path.c_str());

    // order bound too small to form the Euler-Lagrange expression
    CHECK(run({"el", "--builtin", "laplace-1d", "--order-bound", "1"}).code == 3);

    // an already-expired deadline cancels at the first checkpoint
    const RunResult t = run({"el", "--builtin", "hilbert-2d", "--timeout", "0.000001"});
    CHECK(t.code == 3);
    CHECK(t.err.find("timed out") != std::string::npos);
}

TEST_CASE("list-models is stable") {
    const RunResult r = run({"list-models"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "laplace-1d\nwave-1d\nlaplace-2d\nhilbert-2d\nmaxwell-2d\n"
          "metric-generic-2d\nem-generic-2d\n");
}

TEST_CASE("repeated invocations are byte-identical") {
    const std::vector<std::vector<std::string>> matrix = {
        {"el", "--builtin", "wave-1d"},
        {"el", "--builtin", "wave-1d", "--output", "json"},
        {"check-variational", "--builtin", "laplace-2d"},
        {"current", "--builtin", "laplace-2d", "--field", "shift"},
        {"divergence", "--builtin", "laplace-1d"},
        {"list-models", "--output", "json"},
        {"export-model", "wave-1d"},
    };
    for (const auto& args : matrix) {
        const RunResult a = run(args);
        const RunResult b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
    }
}

TEST_CASE("json output validates against the shipped schema") {
    const json schema = load_schema("cli-output.schema.json");
    std::vector<std::vector<std::string>> matrix = {
        {"symmetry", "--builtin", "laplace-1d", "--field", "shift", "--output", "json"},
        {"current", "--builtin", "laplace-1d", "--field", "shift", "--output", "json"},
        {"current", "--builtin", "laplace-1d", "--field", "translation", "--output",
         "json"},
        {"list-models", "--output", "json"},
        {"export-model", "laplace-1d", "--output", "json"},
        {"el", "--builtin", "no-such", "--output", "json"},
    };
    const std::vector<std::string> models = {
        "laplace-1d", "wave-1d",          "laplace-2d",   "hilbert-2d",
        "maxwell-2d", "metric-generic-2d", "em-generic-2d"};
    for (const std::string& m : models)
        for (const std::string cmd :
             {"el", "check-variational", "null", "divergence", "check-natural"})
            matrix.push_back({cmd, "--builtin", m, "--output", "json"});

    for (const auto& args : matrix) {
        CAPTURE(args);
        const RunResult r = run(args);
        const json doc = json::parse(r.out);
        std::string error;
        const bool ok = testsupport::validate_schema(doc, schema, error);
        CAPTURE(error);
        CHECK(ok);
    }
}

TEST_CASE("exported models validate and roundtrip") {
    const json schema = load_schema("model-file.schema.json");
    for (const std::string name :
         {"laplace-1d", "wave-1d", "metric-generic-2d", "maxwell-2d"}) {
        const RunResult r = run({"export-model", name});
        CHECK(r.code == 0);
        const json doc = json::parse(r.out);
        std::string error;
        const bool ok = testsupport::validate_schema(doc, schema, error);
        CAPTURE(error);
        CHECK(ok);

        const std::string path = write_temp_model(r.out, "export_" + name);
        const Model loaded = load_model_file(path);
        CHECK(loaded.name == name);
        const Model original = builtin_model(name);
        const SourceEquation a = effective_source(loaded);
        const SourceEquation b = effective_source(original);
        REQUIRE(a.comps.size() == b.comps.size());
        for (std::size_t k = 0; k < a.comps.size(); ++k)
            CHECK((a.comps[k] - b.comps[k]).is_zero());
        std::remove(path.c_str());
    }
}

TEST_CASE("shipped example model validates against the schema") {
    const json schema = load_schema("model-file.schema.json");
    std::ifstream in(std::string(VARJET_DOCS_DIR) + "/models/laplace-1d.json");
    REQUIRE(in.good());
    json doc;
    in >> doc;
    std::string error;
    const bool ok = testsupport::validate_schema(doc, schema, error);
    CAPTURE(error);
    CHECK(ok);
}

TEST_SUITE_END();
