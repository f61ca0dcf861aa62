#include <catch2/catch_amalgamated.hpp>

#include "groco/io.hpp"
#include "corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace groco;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) {
    return std::string(GROCO_DATA_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("groco_io_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    fs::path outfile =
        fs::temp_directory_path() / ("groco_cli_" + std::to_string(counter++) + ".txt");
    std::string cmd =
        std::string(GROCO_CLI_PATH) + " " + args + " > " + outfile.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliRun r;
    if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
    r.out = slurp(outfile);
    fs::remove(outfile);
    return r;
}

bool same_rep(const RepUpToHomotopy& a, const RepUpToHomotopy& b) {
    return *a.base == *b.base && a.bundle == b.bundle && a.blocks == b.blocks;
}

bool same_sset(const TruncatedSSet& a, const TruncatedSSet& b) {
    return a.cap == b.cap && a.face == b.face && a.label == b.label;
}

}  // namespace

TEST_CASE("rational strings parse exactly and reject junk") {
    REQUIRE(rat_from_string("0", "t") == Rat(0));
    REQUIRE(rat_from_string("-7", "t") == Rat(-7));
    REQUIRE(rat_from_string("7/2", "t") == Rat(7, 2));
    REQUIRE(rat_from_string("-7/2", "t") == Rat(-7, 2));
    // non-canonical input is accepted and reduced
    REQUIRE(rat_from_string("4/2", "t") == Rat(2));
    REQUIRE(rat_to_string(rat_from_string("4/2", "t")) == "2");
    REQUIRE(rat_to_string(Rat(-3, 6)) == "-1/2");
    REQUIRE(rat_to_string(Rat(5)) == "5");

    for (const char* bad : {"", "1/0", "2/-3", "1.5", "x", "1/", "/2", "--1", " 1",
                            "1 ", "0x10", "+3", "1e3"}) {
        INFO("input: '" << bad << "'");
        REQUIRE_THROWS_AS(rat_from_string(bad, "t"), InputError);
    }
}

TEST_CASE("matrices serialize entrywise and round trip") {
    QMat m(2, 3);
    m.set(0, 0, Rat(1, 3));
    m.set(0, 2, Rat(-5));
    m.set(1, 1, Rat(7, 2));
    REQUIRE(matrix_from_json(matrix_to_json(m), "t") == m);
    REQUIRE(matrix_from_json(matrix_to_json(QMat(0, 0)), "t") == QMat(0, 0));

    Json ragged = Json::array({Json::array({"1", "2"}), Json::array({"3"})});
    REQUIRE_THROWS_WITH(matrix_from_json(ragged, "t"),
                        Catch::Matchers::ContainsSubstring("ragged"));
}

TEST_CASE("groupoid files round trip through save and load") {
    auto dir = fresh_dir("groupoid_rt");
    FileStore store;
    for (const char* name : {"pt", "unit2", "pair2", "pair3", "z2", "z3", "cech52",
                             "cech42", "gauge"}) {
        INFO("groupoid: " << name);
        auto orig = load_groupoid(data_path(std::string(name) + ".json"), store);
        fs::path copy = dir / (std::string(name) + ".json");
        save_groupoid(*orig, copy.string());
        FileStore store2;
        auto back = load_groupoid(copy.string(), store2);
        REQUIRE(*back == *orig);
    }
}

TEST_CASE("rep files round trip and keep every block") {
    auto dir = fresh_dir("rep_rt");
    for (const char* name :
         {"trivial_pair3", "trivial_z2", "trivial_z3", "trivial_unit2", "sign_z2",
          "two_term_pt", "two_term_unit2", "two_term_pair2", "three_term_unit2",
          "dual_two_term_pt", "shift_two_term_pt", "pullback_two_term_cech42"}) {
        INFO("rep: " << name);
        FileStore store;
        auto orig = load_rep(data_path(std::string(name) + ".json"), store);
        save_groupoid(*orig->base, (dir / "g.json").string());
        fs::path copy = dir / (std::string(name) + ".json");
        save_rep(*orig, "g.json", copy.string());
        FileStore store2;
        auto back = load_rep(copy.string(), store2);
        REQUIRE(same_rep(*back, *orig));
    }
}

TEST_CASE("morphism files round trip") {
    auto dir = fresh_dir("mor_rt");
    for (const char* name : {"proj52", "proj42", "pair3_to_pt", "z3_to_pt",
                             "gauge_to_z2", "pt_to_unit2"}) {
        INFO("morphism: " << name);
        FileStore store;
        auto orig = load_morphism(data_path(std::string(name) + ".json"), store);
        save_groupoid(*orig.dom, (dir / "d.json").string());
        save_groupoid(*orig.cod, (dir / "c.json").string());
        fs::path copy = dir / (std::string(name) + ".json");
        save_morphism(orig, "d.json", "c.json", copy.string());
        FileStore store2;
        auto back = load_morphism(copy.string(), store2);
        REQUIRE(*back.dom == *orig.dom);
        REQUIRE(*back.cod == *orig.cod);
        REQUIRE(back.obj_map == orig.obj_map);
        REQUIRE(back.arrow_map == orig.arrow_map);
    }
}

TEST_CASE("simplicial set files round trip with labels") {
    auto dir = fresh_dir("sset_rt");
    for (const char* name : {"nerve_pt", "nerve_unit2", "nerve_pair2", "nerve_pair3",
                             "nerve_z2", "nerve_z3", "nerve_cech42", "nerve_cech52",
                             "nerve_gauge", "loop1", "loopxpair2"}) {
        INFO("sset: " << name);
        FileStore store;
        auto orig = load_sset(data_path(std::string(name) + ".json"), store);
        fs::path copy = dir / (std::string(name) + ".json");
        save_sset(*orig, copy.string());
        FileStore store2;
        auto back = load_sset(copy.string(), store2);
        REQUIRE(same_sset(*back, *orig));
    }
}

TEST_CASE("simplicial map files round trip") {
    auto dir = fresh_dir("smap_rt");
    for (const char* name :
         {"nerve_pair3_to_pt", "nerve_proj42", "nerve_proj52", "nerve_gauge_to_z2",
          "nerve_z3_to_pt", "loop1_to_pt", "loopxpair2_to_pt", "identity_nerve_pair2"}) {
        INFO("sset map: " << name);
        FileStore store;
        auto orig = load_sset_map(data_path(std::string(name) + ".json"), store);
        save_sset(*orig.dom, (dir / "d.json").string());
        save_sset(*orig.cod, (dir / "c.json").string());
        fs::path copy = dir / (std::string(name) + ".json");
        save_sset_map(orig, "d.json", "c.json", copy.string());
        FileStore store2;
        auto back = load_sset_map(copy.string(), store2);
        REQUIRE(same_sset(*back.dom, *orig.dom));
        REQUIRE(same_sset(*back.cod, *orig.cod));
        REQUIRE(back.val == orig.val);
    }
}

TEST_CASE("file store shares one object per file and records digests once") {
    FileStore store;
    auto g1 = load_groupoid(data_path("z3.json"), store);
    auto g2 = load_groupoid(data_path("z3.json"), store);
    REQUIRE(g1.get() == g2.get());

    // a rep referencing the same groupoid file reuses the cached object
    auto r = load_rep(data_path("trivial_z3.json"), store);
    REQUIRE(r->base.get() == g1.get());

    // three distinct files touched, each listed exactly once, digests 16 hex chars
    REQUIRE(store.digests.size() == 2);
    for (const auto& [path, dig] : store.digests) {
        REQUIRE(dig.size() == 16);
        REQUIRE(dig.find_first_not_of("0123456789abcdef") == std::string::npos);
    }
}

TEST_CASE("digests track content, not paths") {
    auto dir = fresh_dir("digest");
    spit(dir / "a.json", "{\"x\": 1}\n");
    spit(dir / "b.json", "{\"x\": 1}\n");
    spit(dir / "c.json", "{\"x\": 2}\n");
    FileStore store;
    read_json_file((dir / "a.json").string(), store);
    read_json_file((dir / "b.json").string(), store);
    read_json_file((dir / "c.json").string(), store);
    REQUIRE(store.digests.size() == 3);
    REQUIRE(store.digests[0].second == store.digests[1].second);
    REQUIRE(store.digests[0].second != store.digests[2].second);
}

TEST_CASE("malformed files are rejected with located errors") {
    auto dir = fresh_dir("malformed");
    using Catch::Matchers::ContainsSubstring;

    SECTION("syntax errors name the file") {
        fs::path p = dir / "broken.json";
        spit(p, "this is { not json");
        FileStore store;
        REQUIRE_THROWS_WITH(read_json_file(p.string(), store),
                            ContainsSubstring("broken.json"));
    }

    SECTION("wrong kind is refused") {
        FileStore store;
        REQUIRE_THROWS_WITH(load_rep(data_path("pt.json"), store),
                            ContainsSubstring("expected kind 'rep'"));
    }

    SECTION("missing file") {
        FileStore store;
        REQUIRE_THROWS_AS(load_groupoid((dir / "nope.json").string(), store),
                          InputError);
    }

    SECTION("block with the wrong shape") {
        FileStore store;
        Json j = read_json_file(data_path("two_term_pt.json"), store);
        for (auto& b : j["blocks"])
            if (b["m"].get<int>() == 1) {
                b["matrix"] = Json::array({Json::array({"1", "1"})});
                break;
            }
        fs::path p = dir / "bad_rep.json";
        write_json_file(p.string(), j);
        save_groupoid(*corpus::pt(), (dir / "pt.json").string());
        FileStore store2;
        REQUIRE_THROWS_WITH(load_rep(p.string(), store2), ContainsSubstring("shape"));
    }

    SECTION("block violating the coefficient axioms") {
        FileStore store;
        Json j = read_json_file(data_path("two_term_pt.json"), store);
        bool hit = false;
        for (auto& b : j["blocks"])
            if (b["m"].get<int>() == 1 && b["degree"].get<int>() == 1) {
                b["matrix"][0][0] = "17";
                hit = true;
                break;
            }
        REQUIRE(hit);
        fs::path p = dir / "bad_axioms.json";
        write_json_file(p.string(), j);
        save_groupoid(*corpus::pt(), (dir / "pt.json").string());
        FileStore store2;
        REQUIRE_THROWS_WITH(load_rep(p.string(), store2),
                            ContainsSubstring("coefficient axioms fail"));
    }

    SECTION("face record out of range") {
        FileStore store;
        Json j = read_json_file(data_path("nerve_pair2.json"), store);
        j["levels"][1]["simplices"][0]["faces"][0]["id"] = 99;
        fs::path p = dir / "bad_sset.json";
        write_json_file(p.string(), j);
        FileStore store2;
        REQUIRE_THROWS_WITH(load_sset(p.string(), store2),
                            ContainsSubstring("face structure violation"));
    }

    SECTION("composition table missing an entry") {
        FileStore store;
        Json j = read_json_file(data_path("z3.json"), store);
        auto& comp = j["compose"];
        comp.erase(comp.size() - 1);
        fs::path p = dir / "bad_groupoid.json";
        write_json_file(p.string(), j);
        FileStore store2;
        REQUIRE_THROWS_WITH(load_groupoid(p.string(), store2),
                            ContainsSubstring("no composite listed"));
    }
}

TEST_CASE("file kinds are detected") {
    FileStore store;
    REQUIRE(file_kind(data_path("z2.json"), store) == "groupoid");
    REQUIRE(file_kind(data_path("sign_z2.json"), store) == "rep");
    REQUIRE(file_kind(data_path("proj42.json"), store) == "morphism");
    REQUIRE(file_kind(data_path("loop1.json"), store) == "sset");
    REQUIRE(file_kind(data_path("loop1_to_pt.json"), store) == "sset_map");
}

TEST_CASE("cli: validation and exit codes") {
    auto ok = run_cli("validate " + data_path("pt.json") + " " +
                      data_path("trivial_z3.json"));
    REQUIRE(ok.status == 0);
    REQUIRE(ok.out.find("PASS") != std::string::npos);
    REQUIRE(ok.out.find("FAIL") == std::string::npos);

    auto dir = fresh_dir("cli_bad");
    spit(dir / "garbage.json", "not json at all");
    auto bad = run_cli("validate " + (dir / "garbage.json").string());
    REQUIRE(bad.status == 2);
    REQUIRE(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("cli: cohomology dims match the library") {
    auto r = run_cli("cohomology " + data_path("z3.json") + " " +
                     data_path("trivial_z3.json") + " --max-degree 3");
    REQUIRE(r.status == 0);
    REQUIRE(r.out.find("(1, 0, 0)") != std::string::npos);

    auto two = run_cli("cohomology " + data_path("pt.json") + " " +
                       data_path("two_term_pt.json") + " --max-degree 2");
    REQUIRE(two.status == 0);
    REQUIRE(two.out.find("degrees -1..1") != std::string::npos);
    REQUIRE(two.out.find("(1, 1, 0)") != std::string::npos);
}

TEST_CASE("cli: verdicts carry the right exit codes") {
    // a genuine equivalence check refusal: not a hypercover
    auto ref = run_cli("morita " + data_path("z3_to_pt.json") + " " +
                       data_path("two_term_pt.json"));
    REQUIRE(ref.status == 2);
    REQUIRE(ref.out.find("FAIL") != std::string::npos);
    REQUIRE(ref.out.find("hypercover") != std::string::npos);

    auto desc = run_cli("descent " + data_path("nerve_z3_to_pt.json"));
    REQUIRE(desc.status == 2);

    auto good = run_cli("descent " + data_path("nerve_pair3_to_pt.json"));
    REQUIRE(good.status == 0);
    REQUIRE(good.out.find("FAIL") == std::string::npos);

    // unknown subcommand is a usage error
    auto usage = run_cli("frobnicate");
    REQUIRE(usage.status == 2);
}

TEST_CASE("cli: runs are deterministic and machine output parses") {
    std::string cmd = "descent " + data_path("nerve_pair3_to_pt.json");
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    REQUIRE(a.status == 0);
    REQUIRE(a.out == b.out);

    auto m = run_cli(cmd + " --format machine");
    REQUIRE(m.status == 0);
    Json j = Json::parse(m.out);
    REQUIRE(j["exit_status"].get<int>() == 0);
    REQUIRE(j["checks"].size() >= 4);
    for (const auto& c : j["checks"]) REQUIRE(c["pass"].get<bool>());
    bool found = false;
    for (const auto& t : j["tables"])
        if (t["name"] == "H (domain)") {
            REQUIRE(t["dims"] == Json::array({1, 0, 0}));
            found = true;
        }
    REQUIRE(found);
    // machine runs are byte-stable too
    auto m2 = run_cli(cmd + " --format machine");
    REQUIRE(m.out == m2.out);
}
