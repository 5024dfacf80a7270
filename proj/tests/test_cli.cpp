#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

namespace {

// run a command with optional stdin payload; capture stdout and exit code
std::pair<int, std::string> run(const std::string& cmd, const std::string& input = "") {
    std::string full = cmd;
    std::string tmp_in;
    if (!input.empty()) {
        tmp_in = "/tmp/wittflow_cli_in.json";
        FILE* f = std::fopen(tmp_in.c_str(), "w");
        std::fwrite(input.data(), 1, input.size(), f);
        std::fclose(f);
        full += " --in " + tmp_in;
    }
    full += " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

const std::string kBin = WITTFLOW_CLI_PATH;

}  // namespace

TEST_CASE("classify subcommand matches the pinned value") {
    auto [code, out] = run(kBin + " correspond classify --q 4 --f 2 --n 1 --r 1");
    CHECK(code == 0);
    CHECK(out.find("\"flows\": 3") != std::string::npos);
    CHECK(out.find("\"reps\": 3") != std::string::npos);
    CHECK(out.find("\"match\": true") != std::string::npos);
}

TEST_CASE("witt teichmuller pinned value") {
    auto [code, out] =
        run(kBin + " witt", R"({"op":"teichmuller","ring":{"p":2,"n":2,"m":1},"a":{"coeffs":[1]}})");
    CHECK(code == 0);
    CHECK(out.find("1") != std::string::npos);
}

TEST_CASE("byte determinism across repeated runs") {
    std::string req =
        R"({"case":"point","base":{"p":3,"n":2,"m":2},"f":1,"A":[[{"coeffs":[2,3]}]]})";
    std::string wrapped = R"({"flow":)" + req + "}";
    auto [c3, o3] = run(kBin + " correspond roundtrip", wrapped);
    auto [c4, o4] = run(kBin + " correspond roundtrip", wrapped);
    CHECK(c3 == 0);
    CHECK(o3 == o4);
    CHECK(o3.find("isomorphic") != std::string::npos);
}

TEST_CASE("error exit codes") {
    // schema error -> 2
    auto [c1, o1] = run(kBin + " flow shift", R"({"not_a_flow": 1})");
    CHECK(c1 == 2);
    CHECK(o1.find("schema") != std::string::npos);
    // budget error -> 3
    std::string req =
        R"({"ring":{"p":2,"n":1,"m":1},"B":[[{"coeffs":[1]}]],"f":1})";
    auto [c2, o2] = run(kBin + " solve --budget-extension-degree 0", req);
    CHECK(c2 == 3);
    CHECK(o2.find("budget") != std::string::npos);
}

TEST_CASE("galois corollary on the Kummer pair: iso and N-stable") {
    std::string flow =
        R"({"flow":{"case":"curve","base":{"p":3,"n":1,"m":1},)"
        R"("lift":{"image_of_t":{"terms":[{"exp":3,"coeff":{"coeffs":[1]}}]}},)"
        R"("f":1,"A":[[{"terms":[{"exp":1,"coeff":{"coeffs":[1]}}]}]]},"N_values":[1,2]})";
    auto [code, out] = run(kBin + " galois corollary", flow);
    CHECK(code == 0);
    CHECK(out.find("\"iso\": true") != std::string::npos);
    CHECK(out.find("\"N_stable\": true") != std::string::npos);
}

TEST_CASE("solve reports the module shape") {
    std::string req = R"({"ring":{"p":2,"n":2,"m":1},"B":[[{"coeffs":[3]}]],"f":1})";
    auto [code, out] = run(kBin + " solve", req);
    CHECK(code == 0);
    CHECK(out.find("cardinality_log_p\": 2") != std::string::npos);
}
