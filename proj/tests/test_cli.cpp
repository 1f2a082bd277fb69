#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffc/cli.hpp"
#include "ffc/errors.hpp"
#include "ffc/json_io.hpp"

using namespace ffc;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ffc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "ffc_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const json& j) {
  const auto path = scratch() / name;
  std::ofstream(path) << j.dump();
  return path.string();
}

const json kCtx{{"A", {"a"}}, {"B", {"b", "c", "d"}}, {"w", "bbccdd"}, {"b", "b"}};

}  // namespace

TEST_CASE("whitehead subcommand") {
  auto r = run({"whitehead", "--rank", "3", "--word", "bbccdd", "--test", "filling"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"result\": true") != std::string::npos);
  CHECK(run({"whitehead", "--rank", "3", "--word", "bcB", "--test", "primitive"}).doc()["result"] == true);
  CHECK(run({"whitehead", "--rank", "3", "--word", "bcBa", "--test", "minimize"}).doc()["cyclic_length"] == 1);
  CHECK(run({"whitehead", "--rank", "2", "--word", "ab", "--test", "graph"}).doc()["edges"].size() == 2);
  CHECK(run({"whitehead", "--rank", "2", "--word", "abcd", "--test", "filling"}).code == 2);
  CHECK(run({"whitehead", "--rank", "2", "--word", "ab", "--test", "nonsense"}).code == 2);
}

TEST_CASE("subgroup subcommands and exit codes") {
  CHECK(run({"subgroup", "basis", "--rank", "4", "--tuple", "a,cdbDC,c,d"}).code == 0);
  auto r = run({"subgroup", "basis", "--rank", "3", "--tuple", "a,bb,c"});
  CHECK(r.code == 1);
  CHECK(r.doc()["result"] == false);
  CHECK(run({"subgroup", "rewrite", "--basis", "a,cdbDC,c,d", "--word", "b"}).doc()["result"] == "DCbcd");
  CHECK(run({"subgroup", "member", "--gens", "a,bb", "--word", "abba"}).doc()["result"] == true);
  CHECK(run({"subgroup", "conj-into", "--sub", "a", "--into", "b,c"}).doc()["result"] == false);
  CHECK(run({"subgroup", "fold", "--gens", "a,bb"}).doc()["vertices"] == 2);
  CHECK(run({"subgroup", "basis", "--rank", "3", "--tuple", "a,b"}).code == 2);
  CHECK(run({"subgroup"}).code == 2);
}

TEST_CASE("phi subcommand") {
  const auto ctx = write("ctx.json", kCtx);
  const auto tx = write("tx.json", json{{"vertex_basis", {"a", "b"}}, {"loops", {"c", "d"}}});
  auto r = run({"phi", "--splitting", tx, "--ctx", ctx});
  CHECK(r.code == 0);
  CHECK(r.doc()["phi"] == 0);
  CHECK(r.doc()["tau"] == 4);
  const auto bad = write("bad_ctx.json", json{{"A", {"a"}}, {"B", {"b", "c", "d"}}, {"w", "bc"}, {"b", "b"}});
  r = run({"phi", "--splitting", tx, "--ctx", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("filling") != std::string::npos);
  CHECK(run({"phi", "--splitting", "/nonexistent.json", "--ctx", ctx}).code == 2);
}

TEST_CASE("loop, disc and ffn subcommands") {
  auto r = run({"loop", "build", "--N", "2"});
  REQUIRE(r.code == 0);
  const auto loop = write("c2.json", r.doc());
  CHECK(run({"loop", "verify", "--loop", loop}).code == 0);

  r = run({"ffn", "cap", "--N", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["triangles"] == 4);
  json disc = r.doc()["disc"];
  const auto good = write("disc.json", disc);
  CHECK(run({"disc", "verify", "--disc", good, "--loop", loop}).code == 0);

  disc["triangles"].erase(disc["triangles"].size() - 1);
  const auto bad = write("bad_disc.json", disc);
  r = run({"disc", "verify", "--disc", bad, "--loop", loop});
  CHECK(r.code == 1);
  CHECK(r.doc()["result"] == false);
  CHECK_FALSE(r.doc()["reason"].get<std::string>().empty());

  r = run({"disc", "verify", "--disc", good, "--loop", loop, "--kind", "ff"});
  CHECK(r.code == 1);
  CHECK(run({"disc", "verify", "--disc", good, "--loop", loop, "--kind", "zz"}).code == 2);

  const auto s1 = write("s1.json", json{{"components", {json{{"generators", {"a"}}, {"rank", 4}},
                                                        json{{"generators", {"b"}}, {"rank", 4}}}},
                                        {"joint_basis", {"a", "b", "c", "d"}}});
  const auto s2 = write("s2.json", json{{"generators", {"a", "b"}}, {"rank", 4}});
  CHECK(run({"ffn", "leq", "--s1", s1, "--s2", s2}).doc()["result"] == true);
  CHECK(run({"ffn", "leq", "--s1", s2, "--s2", s1}).doc()["result"] == false);
}

TEST_CASE("bound, link and folds subcommands") {
  auto r = run({"bound", "--N", "10", "--samples", "50", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["psi_AN"] == 10);
  CHECK(r.doc()["seed"] == 3);
  CHECK(run({"bound", "--N", "0"}).code == 2);

  const auto x = write("x.json", json{{"generators", {"a", "b"}}, {"rank", 4}});
  const auto y = write("y.json", json{{"generators", {"a", "c"}}, {"rank", 4}});
  const auto a = write("a.json", json{{"generators", {"a"}}, {"rank", 4}});
  r = run({"link", "path", "--from", x, "--to", y, "--A", a});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["length"].get<int>() <= 5);

  const auto seq = write("seq.json", json{{"source_basis", {"a", "b", "c", "d"}},
                                          {"target_basis", {"a", "cdbDC", "c", "d"}},
                                          {"h_petals", 1}});
  r = run({"folds", "build", "--seq", seq});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["count"] == 4);
  r = run({"folds", "diagnose", "--seq", seq, "--w", "bbccdd", "--gates", "residual"});
  REQUIRE(r.code == 0);
  CHECK(r.doc()["states"].size() == 5);
  const auto nonbasis = write("nb.json", json{{"source_basis", {"a", "b", "c", "d"}},
                                              {"target_basis", {"a", "bb", "c", "d"}},
                                              {"h_petals", 1}});
  CHECK(run({"folds", "build", "--seq", nonbasis}).code == 1);
}

TEST_CASE("reproduce report") {
  const auto path = (scratch() / "report.json").string();
  auto r = run({"reproduce", "--N", "1,2,3", "--samples", "40", "--out", path});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  CHECK(doc["version"] == version());
  CHECK(doc["config"]["seed"].is_number());
  CHECK(doc["runs"].size() == 3);
  for (const auto& run_doc : doc["runs"]) {
    CHECK(run_doc["psi_A0"] == 0);
    CHECK(run_doc["psi_AN"] == run_doc["N"]);
    CHECK(run_doc["ffn_cap"]["triangles"] == 4);
  }
  std::ifstream f(path);
  std::stringstream file;
  file << f.rdbuf();
  CHECK(file.str() == r.out);
  // Determinism.
  CHECK(run({"reproduce", "--N", "1,2,3", "--samples", "40", "--out", path}).out == r.out);
}

TEST_CASE("run configuration validates eagerly") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.context());
  cfg.w = "bcbc";
  CHECK_THROWS_WITH_AS(cfg.context(), doctest::Contains("power"), InputError);
  cfg.w = "bbccdd";
  cfg.b = "bb";
  CHECK_THROWS_WITH_AS(cfg.context(), doctest::Contains("primitive"), InputError);
  cfg.b = "b";
  cfg.rank = 3;
  CHECK_THROWS_AS(cfg.context(), InputError);
}

TEST_CASE("emitted documents re-parse through their schemas") {
  auto r = run({"loop", "build", "--N", "3"});
  const auto loop = io::decode_loop(r.doc());
  CHECK(io::encode(loop) == r.doc());

  r = run({"ffn", "cap", "--N", "3"});
  const auto disc = io::decode_disc(r.doc()["disc"]);
  CHECK(io::encode(disc) == r.doc()["disc"]);

  const auto ctx = io::decode_context(kCtx);
  CHECK(io::encode(ctx) == kCtx);

  r = run({"subgroup", "fold", "--gens", "ab,ac"});
  CHECK(io::encode(io::decode_core_graph(r.doc())) == r.doc());

  const json split{{"vertex_basis", {"a", "b"}}, {"loops", {"c", "d"}}};
  CHECK(io::encode(io::decode_splitting(split)) == split);
}
