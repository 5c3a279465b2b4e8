#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int status = 0;
    std::string out;
    std::string err;
};

std::string data(const std::string& name) { return std::string(QKNOTS_DATA_DIR) + "/" + name; }

Result qk(std::vector<std::string> args) {
    args.insert(args.begin(), "qknots");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.status = qknots::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json qkj(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    const Result r = qk(args);
    INFO(r.err);
    REQUIRE(r.status == 0);
    return json::parse(r.out);
}

fs::path scratch(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "qknots_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("knot commands") {
    CHECK(qk({"knot", "bracket", data("hopf.pd")}).out == "-A^4 - A^-4\n");
    CHECK(qk({"knot", "bracket", data("trefoil.pd")}).out == "-A^5 - A^-3 + A^-7\n");
    CHECK(qk({"knot", "bracket", data("borromean.braid")}).out == qk({"knot", "bracket", data("borromean.pd")}).out);
    const auto unlink = scratch("unlink2.pd", "O[2]\n");
    CHECK(qk({"knot", "bracket", unlink.string()}).out == "-A^2 - A^-2\n");

    const json p = qkj({"knot", "parse", data("hopf.pd")});
    CHECK(p["components"] == 2);
    CHECK(p["crossings"] == 2);
    CHECK(p["linking_matrix"][0][1] == -1);

    const json j = qkj({"knot", "jones", data("trefoil.pd")});
    CHECK(j["normalized"] == "A^-4 + A^-12 - A^-16");
    CHECK(j["jones"] == "-t^4 + t^3 + t");
    // Unknot with one kink: normalized invariant 1.
    const auto kink = scratch("kink.pd", "X[1,1,2,2]\n");
    CHECK(qkj({"knot", "jones", kink.string()})["normalized"] == "1");

    const json sites = qkj({"knot", "moves", data("trefoil.pd")});
    REQUIRE(!sites["sites"].empty());
    const json applied = qkj({"knot", "moves", data("trefoil.pd"), "--apply", "0"});
    CHECK(applied["move"] == sites["sites"][0]["move"]);
    const auto moved = scratch("moved.pd", applied["pd"].get<std::string>());
    CHECK(qkj({"knot", "jones", moved.string()})["normalized"] == j["normalized"]);
    CHECK(qk({"knot", "moves", data("trefoil.pd"), "--apply", "100000"}).status == 2);
}

TEST_CASE("qknot commands") {
    const json d = qkj({"qknot", "dist", "--flat", data("flat_trefoil.pd")});
    CHECK(d["distribution"] == json{{"unknot", 0.75}, {"trefoil_L", 0.125}, {"trefoil_R", 0.125}});
    const json h = qkj({"qknot", "dist", "--flat", data("hopf.pd")});
    CHECK(h["distribution"] == json{{"hopf", 0.5}, {"2-unlink", 0.5}});

    const json r = qkj({"qknot", "resolve", "--flat", data("flat_trefoil.pd")});
    CHECK(r.size() == 3);

    const auto m1 = qk({"--format", "json", "qknot", "measure", "--flat", data("flat_trefoil.pd"), "--seed", "42"});
    const auto m2 = qk({"--format", "json", "qknot", "measure", "--flat", data("flat_trefoil.pd"), "--seed", "42"});
    CHECK(m1.status == 0);
    CHECK(m1.out == m2.out);
    CHECK(json::parse(m1.out)["rng"] == "mt19937_64");
    CHECK(qk({"qknot", "measure", "--flat", data("flat_trefoil.pd")}).status == 2);  // seed is required

    const json many =
        qkj({"qknot", "measure", "--flat", data("flat_trefoil.pd"), "--seed", "7", "--samples", "4000"});
    CHECK(many["counts"]["unknot"].get<int>() + many["counts"]["trefoil_L"].get<int>() +
              many["counts"]["trefoil_R"].get<int>() ==
          4000);
    CHECK(std::abs(many["frequencies"]["unknot"].get<double>() - 0.75) < 0.03);

    const json e = qkj({"qknot", "expand", data("trefoil.pd")});
    CHECK(e["states"].size() == 8);
    CHECK(e["sum"] == "-A^5 - A^-3 + A^-7");
}

TEST_CASE("state commands") {
    const json g = qkj({"state", "pattern", data("ghz3.state")});
    int rows = 0;
    for (const auto& row : g["rows"])
        for (const auto& b : row["branches"]) {
            ++rows;
            CHECK(b["residual"] == "unentangled");
            CHECK(b["probability"] == 0.5);
        }
    CHECK(rows == 6);

    const json s = qkj({"state", "pattern", data("mixed_pattern.state")});
    CHECK(s["rows"][0]["branches"][0]["residual"] == "unentangled");
    CHECK(s["rows"][0]["branches"][1]["residual"] == "entangled");
    CHECK(s["rows"][0]["branches"][0]["probability"] == 0.5);

    const json pr = qkj({"state", "project", data("mixed_pattern.state"), "--qubit", "0", "--bit", "1"});
    CHECK(pr["probability"] == 0.5);
    CHECK(pr["residual_entangled"] == true);

    const json hb = qkj({"state", "basis-change", data("ghz3.state"), "--qubit", "0", "--matrix",
                         "0.70710678118654752,0.70710678118654752;0.70710678118654752,-0.70710678118654752",
                         "--pattern"});
    std::vector<std::string> flags;
    for (const auto& row : hb["rows"]) flags.push_back(row["branches"][0]["residual"]);
    CHECK(flags == std::vector<std::string>{"entangled", "unentangled", "unentangled"});

    // The text form of a changed state reads back as a state file.
    const auto changed = qk({"state", "basis-change", data("ghz3.state"), "--qubit", "0", "--matrix", "1,1;1,-1"});
    REQUIRE(changed.status == 0);
    const auto f = scratch("changed.state", changed.out);
    CHECK(qkj({"state", "pattern", f.string()})["input_normalized"] == false);

    CHECK(qk({"state", "project", data("mixed_pattern.state"), "--qubit", "9", "--bit", "0"}).status == 2);
    CHECK(qk({"state", "basis-change", data("ghz3.state"), "--qubit", "0", "--matrix", "1,x;1,1"}).status == 2);
}

TEST_CASE("link commands") {
    const json hopf = qkj({"link", "pattern", data("hopf.pd")});
    CHECK(hopf["full_linked"] == true);
    CHECK(hopf["remainder_linked"] == json{false, false});
    const json bor = qkj({"link", "pattern", data("borromean.pd")});
    CHECK(bor["full_linked"] == true);
    CHECK(bor["remainder_linked"] == json{false, false, false});
    const json l = qkj({"link", "pattern", data("hopf_ring.pd")});
    CHECK(l["full_linked"] == true);
    CHECK(l["remainder_linked"] == json{true, false, false});

    CHECK(qk({"link", "brunnian", data("borromean.braid")}).out == "brunnian\n");
    CHECK(qk({"link", "brunnian", data("hopf_ring.pd")}).out == "not_brunnian\n");
    CHECK(qk({"link", "brunnian", data("hopf.pd")}).out == "indeterminate\n");
    CHECK(qk({"--crossing-cap", "4", "link", "brunnian", data("borromean.pd")}).status == 3);

    const json t = qkj({"link", "template", data("borromean.braid")});
    CHECK(t["verdict"] == "brunnian");
    CHECK(t["output"].get<std::string>().rfind("n=4:", 0) == 0);
    CHECK(qk({"link", "template", "--braid", "n=2: s1 s1"}).status == 2);

    const json c1 = qkj({"link", "cutprob", data("borromean_switch.problink"), "--component", "1", "--seed", "3"});
    CHECK(c1 == qkj({"link", "cutprob", data("borromean_switch.problink"), "--component", "1", "--seed", "3"}));
    CHECK(c1["distribution"] == json{{"linked", 0.5}, {"unlinked", 0.5}});
    CHECK(c1["remainder_linked"] == c1["switched"]);

    CHECK(qkj({"link", "match", data("borromean.pd"), data("ghz3.state")})["full_match"] == true);
    CHECK(qkj({"link", "match", data("hopf_ring.pd"), data("ghz3_hadamard0.state")})["full_match"] == true);
    const json sw = qkj({"link", "match", data("borromean_switch.problink"), data("mixed_pattern.state")});
    CHECK(sw["full_match"] == false);
    CHECK(sw["entries"][1]["state_entangled_probability"] == 0.75);
    CHECK(sw["caveat"] == "the correspondence is basis dependent");
}

TEST_CASE("net commands") {
    const auto id3 = scratch("id3.json", R"({"nodes":[{"id":0,"shape":[3,3],"entries":[[1,0],[0,0],[0,0],[0,0],[1,0],
        [0,0],[0,0],[0,0],[1,0]]}],"edges":[[[0,0],[0,1]]],"free_ends":[]})");
    CHECK(qk({"net", "eval", id3.string()}).out == "3\n");
    const auto m = scratch("m.json", R"({"nodes":[{"id":0,"shape":[2,2],"entries":[[1,0],[2,0],[3,0],[4,0]]}],
        "edges":[[[0,0],[0,1]]],"free_ends":[]})");
    const auto cut = qk({"net", "cut", m.string(), "--edge", "0", "--ket", "0,1", "--bra", "1,0"});
    REQUIRE(cut.status == 0);
    const auto cutf = scratch("m_cut.json", cut.out);
    CHECK(qk({"net", "eval", cutf.string()}).out == "2\n");  // <0|M|1>
    const auto dbl = qk({"net", "double", cutf.string()});
    const auto dblf = scratch("m_double.json", dbl.out);
    CHECK(qk({"net", "eval", dblf.string()}).out == "4\n");
    const auto open = qk({"net", "cut", m.string(), "--edge", "0"});
    CHECK(qkj({"net", "eval", scratch("m_open.json", open.out).string()})["shape"] == json{2, 2});
    CHECK(qk({"net", "double", m.string()}).status == 2);

    const auto empty = qk({"net", "from-braid", "--word", "n=3:"});
    CHECK(qk({"net", "eval", scratch("empty.json", empty.out).string()}).out == "8\n");
    const json meas = qkj({"net", "measure", data("borromean.braid"), "--component", "0", "--a", "0", "--b", "0"});
    CHECK(meas["uncut"]["re"] == -8.0);
    CHECK(meas["value"] != meas["deleted"]);
    CHECK(qk({"net", "from-braid", "--word", "n=2: s1", "--r", "/nonexistent.json"}).status == 2);
    CHECK(qk({"--net-budget", "2", "net", "eval", dblf.string()}).status == 3);
}

TEST_CASE("exit statuses and diagnostics") {
    const auto bad = scratch("bad.pd", "# header\nX[1,2,3]\n");
    const auto r = qk({"knot", "bracket", bad.string()});
    CHECK(r.status == 2);
    CHECK(r.err.find("bad.pd") != std::string::npos);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.err.find("X[1,2,3]") != std::string::npos);
    CHECK(qk({"knot", "bracket", "/nonexistent.pd"}).status == 2);
    CHECK(qk({"--crossing-cap", "2", "knot", "bracket", data("trefoil.pd")}).status == 3);
    CHECK(qk({"--crossing-cap", "0", "knot", "bracket", data("trefoil.pd")}).status == 2);
    CHECK(qk({"--format", "yaml", "knot", "bracket", data("trefoil.pd")}).status == 2);
    CHECK(qk({"knot"}).status == 2);
    CHECK(qk({"--help"}).status == 0);
    CHECK(qk({"--help"}).out.find("X[") != std::string::npos);

    setenv("QKNOTS_CROSSING_CAP", "2", 1);
    CHECK(qk({"knot", "bracket", data("trefoil.pd")}).status == 3);
    CHECK(qk({"--crossing-cap", "5", "knot", "bracket", data("trefoil.pd")}).status == 0);  // flag wins
    unsetenv("QKNOTS_CROSSING_CAP");

    const auto out = fs::temp_directory_path() / "qknots_cli_test" / "out.txt";
    CHECK(qk({"-o", out.string(), "knot", "bracket", data("hopf.pd")}).out.empty());
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "-A^4 - A^-4");
}

TEST_CASE("golden JSON outputs are byte-identical") {
    struct Golden {
        std::string name;
        std::vector<std::string> args;
    };
    const std::vector<Golden> cases = {
        {"knot_bracket_borromean", {"knot", "bracket", data("borromean.pd")}},
        {"qknot_dist_flat_trefoil", {"qknot", "dist", "--flat", data("flat_trefoil.pd")}},
        {"qknot_measure_seed_2026", {"qknot", "measure", "--flat", data("flat_trefoil.pd"), "--seed", "2026",
                                     "--samples", "1000"}},
        {"state_pattern_mixed", {"state", "pattern", data("mixed_pattern.state")}},
        {"link_pattern_hopf_ring", {"link", "pattern", data("hopf_ring.pd")}},
        {"link_cutprob_seed_11", {"link", "cutprob", data("borromean_switch.problink"), "--component", "2", "--seed", "11"}},
        {"link_match_borromean_switch", {"link", "match", data("borromean_switch.problink"), data("mixed_pattern.state")}},
        {"net_measure_borromean", {"net", "measure", data("borromean.braid"), "--component", "2", "--a", "1", "--b",
                                   "0"}},
    };
    const bool update = std::getenv("QKNOTS_UPDATE_GOLDEN") != nullptr;
    for (const auto& c : cases) {
        CAPTURE(c.name);
        auto args = c.args;
        args.insert(args.begin(), {"--format", "json"});
        const Result a = qk(args), b = qk(args);
        REQUIRE(a.status == 0);
        CHECK(a.out == b.out);
        const fs::path golden = fs::path(QKNOTS_GOLDEN_DIR) / (c.name + ".json");
        if (update) {
            std::ofstream(golden) << a.out;
            continue;
        }
        std::ifstream in(golden);
        REQUIRE_MESSAGE(in.good(), "missing golden file; run with QKNOTS_UPDATE_GOLDEN=1");
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(a.out == ss.str());
    }
}
