#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include "multidet/cli.hpp"

using namespace multidet;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = MULTIDET_FIXTURE_DIR;

struct Run {
    int code;
    std::string out;
};

/** Runs the installed binary in a child process, with optional environment prefix. */
Run run_process(const std::string& args, const std::string& env = {}) {
    const char* bin = std::getenv("MULTIDET_CLI");
    if (!bin) return {-1, "MULTIDET_CLI not set"};
    std::string cmd = env + (env.empty() ? "" : " ") + bin + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

/** Runs the CLI in process. */
Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "multidet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str() + err.str()};
}

std::string fixture(const std::string& f) { return kFixtures + "/" + f; }

fs::path temp_file(const std::string& name, const std::string& text) {
    auto p = fs::temp_directory_path() / ("multidet_test_" + name);
    std::ofstream(p) << text;
    return p;
}

std::string error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

const char* kDangling = R"({
  "multidet_schema": 1,
  "presentations": [{
    "id": "bad", "objects": ["0", "x"], "zero": "0",
    "triangles": [{"id": "t", "x": "x", "y": "x", "z": "0", "f": "id", "g": "0", "h": "0"}],
    "octahedra": [{"id": "o", "triangles": ["t", "t", "t", "ghost"]}]
  }]
})";

} // namespace

TEST(Workspace, EmptyFileSet) { EXPECT_TRUE(load_workspace({}).empty()); }

TEST(Workspace, BundledGradedLines) {
    auto W = load_workspace({fixture("graded_lines.json")});
    EXPECT_EQ(W.presentations.size(), 1u);
    EXPECT_EQ(W.determinants.size(), 1u);
    EXPECT_TRUE(W.picard.empty() || W.picard.size() == 1u);
    EXPECT_TRUE(W.functors.empty());
}

TEST(Workspace, LoadErrors) {
    auto bad_json = temp_file("parse.json", "{\"multidet_schema\": 1,\n \"picard\": [ }");
    try {
        load_workspace({bad_json.string()});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "ParseError");
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    auto dangling = temp_file("dangling.json", kDangling);
    try {
        load_workspace({dangling.string()});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "UnresolvedReference");
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
    EXPECT_EQ(error_kind([] { load_workspace({fixture("graded_lines.json"), fixture("graded_lines.json")}); }),
              "DuplicateId");
    auto version = temp_file("version.json", R"({"multidet_schema": 2})");
    EXPECT_EQ(error_kind([&] { load_workspace({version.string()}); }), "ParseError");
    auto typo = temp_file("typo.json", R"({"multidet_schema": 1, "determinant": []})");
    EXPECT_EQ(error_kind([&] { load_workspace({typo.string()}); }), "ParseError");
}

TEST(Workspace, EmitLoadRoundTrip) {
    std::vector<std::string> files{fixture("graded_lines.json"),       fixture("tensor.json"),
                                   fixture("rings.json"),              fixture("commutativity_square.json"),
                                   fixture("octahedron_cube.json"),    fixture("invalid/tampered_iso.json")};
    auto first = emit_workspace(load_workspace(files));
    auto path = temp_file("emitted.json", first.dump(2));
    auto W = load_workspace({path.string()});
    EXPECT_EQ(emit_workspace(W).dump(), first.dump());
    EXPECT_EQ(W.presentations.size(), 5u);
    // the explicit determinant keeps its defect
    EXPECT_EQ(validate_determinant(W.determinants.at("tampered")).status(), Status::invalid);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"-i", fixture("rings.json"), "validate-picard"}).code, 0);
    auto unknown = run({"frobnicate"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.out.find("UnknownCommand"), std::string::npos);
    auto missing = run({"-i", fixture("rings.json"), "--id", "nope", "validate-picard"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.out.find("UnresolvedReference"), std::string::npos);
    EXPECT_EQ(run({"-i", fixture("does-not-exist.json"), "check-det"}).code, 2);
}

TEST(Cli, SeededInvalidDeterminants) {
    auto tampered = run({"-i", fixture("invalid/tampered_iso.json"), "check-det"});
    EXPECT_EQ(tampered.code, 1);
    EXPECT_NE(tampered.out.find("fail naturality"), std::string::npos);
    auto naive = run({"-i", fixture("invalid/naive_euler.json"), "--format", "json", "check-det"});
    EXPECT_EQ(naive.code, 1);
    auto j = json::parse(naive.out);
    EXPECT_EQ(j["status"], "invalid");
    EXPECT_EQ(j["checks"]["commutativity"]["failed"], 960);
    EXPECT_EQ(j["checks"]["octahedron"]["failed"], 0);
}

TEST(Cli, QHomologyTable) {
    auto r = run({"--format", "json", "qhomology", "--group", "Z/2", "--max-level", "3"});
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["status"], "valid");
    const auto A = FGAbelianGroup::parse("Z/2");
    EXPECT_EQ(j["data"]["H0"], "Z/2");
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(j["data"]["H" + std::to_string(k)], q_homology(A, k).to_string());
}

TEST(Cli, CommandsOnFixtures) {
    const auto rings = fixture("rings.json"), tensor = fixture("tensor.json");
    EXPECT_EQ(run({"-i", rings, "validate-catring"}).code, 0);
    EXPECT_EQ(run({"-i", rings, "check-multiexact"}).code, 0);
    EXPECT_EQ(run({"-i", fixture("commutativity_square.json"), "check-verdier", "--nine", "square"}).code, 0);
    auto oct = run({"-i", fixture("octahedron_cube.json"), "--id", "octahedron", "oct-to-2cube", "--octahedron", "oct"});
    EXPECT_EQ(oct.code, 0);
    EXPECT_NE(oct.out.find("certificate = yp: lower, oct, upper"), std::string::npos);
    EXPECT_EQ(run({"-i", tensor, "check-verdier-admission"}).code, 0);
    EXPECT_EQ(run({"-i", tensor, "compose-det", "--functor", "tensor"}).code, 0);
    EXPECT_EQ(run({"-i", tensor, "--id", "euler1", "check-cubical-det"}).code, 0);
    EXPECT_EQ(run({"-i", tensor, "--id", "euler1", "cross-check", "--random", "5"}).code, 0);
    auto out = fs::temp_directory_path() / "multidet_test_sum.json";
    EXPECT_EQ(run({"-i", tensor, "--id", "euler1", "--id", "euler1", "sum-dets", "-o", out.string()}).code, 0);
    EXPECT_EQ(run({"-i", out.string(), "check-multidet"}).code, 0);
    EXPECT_EQ(run({"-i", fixture("graded_lines.json"), "k0-ring", "--battery-total", "0"}).code, 0);
}

TEST(Cli, JsonReportsAreDeterministic) {
    const std::string args = "-i " + fixture("invalid/naive_euler.json") + " --format json check-det";
    auto a = run_process(args), b = run_process(args);
    EXPECT_EQ(a.code, 1);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BudgetFromEnvironment) {
    auto full = run_process("check-cubical-relations --group Z/3 --max-dim 2");
    EXPECT_EQ(full.code, 0);
    EXPECT_NE(full.out.find("coverage @ cubes: exhaustive"), std::string::npos);
    auto capped = run_process("check-cubical-relations --group Z/3 --max-dim 2", "MULTIDET_BUDGET=10");
    EXPECT_EQ(capped.code, 0);
    EXPECT_EQ(capped.out.find("exhaustive"), std::string::npos);
}

TEST(Cli, SelftestIsReproducibleAcrossProcesses) {
    const std::string args = "--seed 42 --format json selftest --only 3 --only 4 --only 5";
    auto a = run_process(args), b = run_process(args);
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
    auto j = json::parse(a.out);
    EXPECT_EQ(j["criteria"].size(), 3u);
}
