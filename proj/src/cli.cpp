#include "ffc/cli.hpp"

#include <fstream>
#include <functional>

#include <CLI11.hpp>

#include "ffc/errors.hpp"
#include "ffc/factor_complex.hpp"
#include "ffc/fold_paths.hpp"
#include "ffc/json_io.hpp"
#include "ffc/whitehead.hpp"

#ifndef FFC_VERSION
#define FFC_VERSION "0.0.0"
#endif

namespace ffc {

using nlohmann::json;

const char* version() { return FFC_VERSION; }

namespace {

std::vector<Word> parse_list(const std::vector<std::string>& texts, int rank) {
  return parse_words(std::span<const std::string>(texts), rank);
}

// Result of a subcommand: a JSON document and whether the checked property
// holds.
struct Outcome {
  json doc;
  bool accepted = true;
};

}  // namespace

TwistContext RunConfig::context() const {
  if (rank < 2 || rank > kMaxRank) throw InputError("rank must lie in 2.." + std::to_string(kMaxRank));
  std::vector<Word> av = parse_list(a, rank);
  std::vector<Word> bv;
  if (b_factor.empty()) {
    for (int i = static_cast<int>(av.size()) + 1; i <= rank; ++i) bv.push_back(letter_word(i));
  } else {
    bv = parse_list(b_factor, rank);
  }
  return TwistContext(std::move(av), std::move(bv), parse_word(w, rank), parse_word(b, rank));
}

json RunConfig::to_json() const {
  return json{{"rank", rank},      {"A", a},        {"B", b_factor}, {"w", w},
              {"b", b},            {"N", n_values}, {"samples", samples},
              {"seed", seed},      {"output", output}};
}

json cmd_reproduce(const RunConfig& config) {
  const TwistContext ctx = config.context();
  const BasisChange coords(ctx.adapted_basis());
  // w and b in the coordinates of the adapted basis, restricted to B.
  Alphabet b_alphabet;
  for (int i = static_cast<int>(ctx.a().size()) + 1; i <= ctx.rank(); ++i) b_alphabet.generators.push_back(i);

  json checks;
  auto require = [&](const std::string& name, bool value) {
    checks[name] = value;
    if (!value) throw MathError("check failed: " + name);
  };
  const Word w_b = b_alphabet.compress(coords.to_new(ctx.w()));
  const Word b_b = b_alphabet.compress(coords.to_new(ctx.b()));
  require("w_cyclically_reduced", is_cyclically_reduced(ctx.w()));
  require("w_not_proper_power", !is_proper_power(ctx.w()));
  require("w_filling_in_B", is_filling(w_b, Alphabet::standard(b_alphabet.rank())));
  require("b_primitive_in_B", is_primitive(b_b, Alphabet::standard(b_alphabet.rank())));

  json runs = json::array();
  for (int n : config.n_values) {
    if (n < 1) throw InputError("N must be positive");
    const CombinatorialLoop loop = build_cN(ctx.rank(), n, ctx);
    json run;
    run["N"] = n;
    run["loop"] = io::encode(loop);
    run["loop_valid"] = verify_loop(loop);
    if (!verify_loop(loop)) throw MathError("loop c_" + std::to_string(n) + " is not a loop");
    run["psi_A0"] = psi(loop.vertices[0], ctx);
    run["psi_AN"] = psi(loop.vertices[2], ctx);

    const TriangulatedDisc cap = cap_cN_in_FFn(n, ctx);
    const DiscVerdict verdict = verify_disc(cap, loop, ComplexKind::FreeFactorSystems);
    if (!verdict.ok) throw MathError("cap of c_" + std::to_string(n) + ": " + verdict.reason);
    run["ffn_cap"] = {{"triangles", cap.triangles.size()}, {"valid", verdict.ok}};

    run["certificate"] = io::encode(lower_bound_certificate(n, ctx, config.samples, config.seed));
    runs.push_back(std::move(run));
  }
  return json{{"version", version()}, {"config", config.to_json()}, {"checks", checks}, {"runs", runs}};
}

namespace {

void add_context_options(CLI::App* app, RunConfig& cfg, std::string& ctx_file) {
  app->add_option("--rank", cfg.rank, "Rank of the free group")->capture_default_str();
  app->add_option("--A", cfg.a, "Basis words of the fixed factor A")->delimiter(',')->capture_default_str();
  app->add_option("--B", cfg.b_factor, "Basis words of the complement B (default: remaining generators)")
      ->delimiter(',');
  app->add_option("--w", cfg.w, "Cyclically reduced filling word of B")->capture_default_str();
  app->add_option("--b", cfg.b, "Primitive element of B")->capture_default_str();
  app->add_option("--ctx", ctx_file, "Context file {\"A\",\"B\",\"w\",\"b\"} (overrides the flags)");
}

TwistContext load_context(const RunConfig& cfg, const std::string& ctx_file) {
  if (!ctx_file.empty()) return io::decode_context(io::read_file(ctx_file));
  return cfg.context();
}

ComplexKind parse_kind(const std::string& s) {
  if (s == "ff") return ComplexKind::FreeFactors;
  if (s == "ffs") return ComplexKind::FreeFactorSystems;
  throw InputError("unknown complex kind '" + s + "' (expected ff or ffs)");
}

const char* kHelpFooter = R"(Words use the codec a..z for generators and A..Z for their inverses.
JSON schemas:
  context    {"A": [words], "B": [words], "w": word, "b": word}
  splitting  {"vertex_basis": [words], "loops": [words]}
  vertex     {"generators": [words], "ambient_extension": [words]}
             or {"generators": [words], "rank": n}
  loop       {"vertices": [vertex, ...]}
  system     {"components": [vertex, ...], "joint_basis": [words]} or a vertex
  disc       {"vertices": n, "triangles": [[i,j,k], ...], "boundary": [ids],
              "labels": [system, ...]}
  folds      {"source_basis": [words], "target_basis": [words], "h_petals": k}
Exit codes: 0 success, 1 mathematical rejection, 2 malformed input.)";

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free factor complex toolkit", "ffc"};
  app.footer(kHelpFooter);
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::function<Outcome()> action;

  // reproduce
  RunConfig repro;
  auto* reproduce = app.add_subcommand("reproduce", "Run the full c_N pipeline and write a JSON report");
  reproduce->add_option("--N", repro.n_values, "Loop parameters")->delimiter(',')->capture_default_str();
  reproduce->add_option("--samples", repro.samples, "Link pairs per certificate")->capture_default_str();
  reproduce->add_option("--seed", repro.seed, "Seed for all sampling")->capture_default_str();
  reproduce->add_option("--out", repro.output, "Also write the report to this file");
  reproduce->add_option("--rank", repro.rank, "Rank of the free group")->capture_default_str();
  reproduce->add_option("--w", repro.w, "Filling word of B")->capture_default_str();
  reproduce->add_option("--b", repro.b, "Primitive element of B")->capture_default_str();
  reproduce->callback([&] {
    action = [&] {
      json report = cmd_reproduce(repro);
      if (!repro.output.empty()) {
        std::ofstream f(repro.output);
        if (!f) throw InputError("cannot write " + repro.output);
        f << report.dump(2) << '\n';
      }
      return Outcome{report};
    };
  });

  // whitehead
  int wh_rank = 0;
  std::string wh_word, wh_test;
  auto* whitehead = app.add_subcommand("whitehead", "Whitehead tests on a word");
  whitehead->add_option("--rank", wh_rank, "Rank of the free group")->required();
  whitehead->add_option("--word", wh_word, "The word")->required();
  whitehead->add_option("--test", wh_test, "filling | primitive | minimize | graph")
      ->required()
      ->check(CLI::IsMember({"filling", "primitive", "minimize", "graph"}));
  whitehead->callback([&] {
    action = [&] {
      if (wh_rank < 1 || wh_rank > kMaxRank) throw InputError("rank out of range");
      // A word on other letters than the first `rank` is read in the free
      // factor spanned by its own generators.
      const Word w = parse_word(wh_word);
      const Alphabet alphabet = Alphabet::fitting(wh_rank, w);
      if (wh_test == "filling") return Outcome{json{{"result", is_filling(w, alphabet)}}};
      if (wh_test == "primitive") {
        if (w.empty()) throw InputError("primitivity of the empty word is undefined");
        return Outcome{json{{"result", is_primitive(w, alphabet)}}};
      }
      const CyclicWord core = cyclic_reduce(alphabet.compress(w)).core;
      if (wh_test == "minimize") {
        const Minimization m = minimize(core, wh_rank);
        return Outcome{json{{"minimal", to_string(alphabet.expand(m.minimal.representative()))},
                            {"cyclic_length", m.minimal.size()},
                            {"transcript_length", m.transcript.size()}}};
      }
      if (core.empty()) throw InputError("Whitehead graph of the trivial word");
      const WhiteheadGraph g = whitehead_graph(core, wh_rank);
      auto name = [&](int bit) {
        return to_string(alphabet.expand(letter_word(WhiteheadAutomorphism::letter_of_bit(bit))));
      };
      json edges = json::array();
      for (auto [u, v] : g.edges) edges.push_back({name(u), name(v)});
      return Outcome{json{{"edges", edges}, {"connected", g.connected()}, {"cut_vertex", g.has_cut_vertex()}}};
    };
  });

  // subgroup
  std::vector<std::string> sg_gens, sg_into;
  std::string sg_word;
  int sg_rank = kMaxRank;
  auto* subgroup = app.add_subcommand("subgroup", "Stallings graphs and bases");
  subgroup->require_subcommand(1);
  auto* sg_fold = subgroup->add_subcommand("fold", "Folded core graph of <gens>");
  sg_fold->add_option("--gens", sg_gens, "Generators")->delimiter(',')->required();
  sg_fold->callback([&] {
    action = [&] {
      const auto gens = parse_list(sg_gens, sg_rank);
      return Outcome{io::encode(fold(gens))};
    };
  });
  auto* sg_member = subgroup->add_subcommand("member", "Membership of a word in <gens>");
  sg_member->add_option("--gens", sg_gens, "Generators")->delimiter(',')->required();
  sg_member->add_option("--word", sg_word, "The word")->required();
  sg_member->callback([&] {
    action = [&] {
      const auto gens = parse_list(sg_gens, sg_rank);
      return Outcome{json{{"result", contains(fold(gens), parse_word(sg_word))}}};
    };
  });
  auto* sg_conj = subgroup->add_subcommand("conj-into", "Is <h> conjugate into <x>?");
  sg_conj->add_option("--sub", sg_gens, "Generators of the smaller subgroup")->delimiter(',')->required();
  sg_conj->add_option("--into", sg_into, "Generators of the larger subgroup")->delimiter(',')->required();
  sg_conj->callback([&] {
    action = [&] {
      const auto h = parse_list(sg_gens, sg_rank);
      const auto x = parse_list(sg_into, sg_rank);
      const auto g = conjugator_into(h, x);
      json doc{{"result", g.has_value()}};
      if (g) doc["conjugator"] = to_string(*g);
      return Outcome{doc};
    };
  });
  auto* sg_basis = subgroup->add_subcommand("basis", "Is the tuple a basis?");
  sg_basis->add_option("--rank", sg_rank, "Rank of the free group")->required();
  sg_basis->add_option("--tuple", sg_gens, "The tuple")->delimiter(',')->required();
  sg_basis->callback([&] {
    action = [&] {
      const BasisCheck c = is_basis(parse_list(sg_gens, sg_rank), sg_rank);
      json doc{{"result", c.is_basis}};
      if (c.is_basis) doc["transcript"] = io::encode(c.transcript);
      return Outcome{doc, c.is_basis};
    };
  });
  auto* sg_rewrite = subgroup->add_subcommand("rewrite", "Coordinates of a word in a basis");
  sg_rewrite->add_option("--basis", sg_gens, "The basis")->delimiter(',')->required();
  sg_rewrite->add_option("--word", sg_word, "The word")->required();
  sg_rewrite->callback([&] {
    action = [&] {
      const auto basis = parse_list(sg_gens, sg_rank);
      const int rank = static_cast<int>(basis.size());
      return Outcome{json{{"result", to_string(rewrite_in_basis(parse_word(sg_word, rank), basis))}}};
    };
  });

  // phi
  std::string phi_splitting, phi_ctx;
  auto* phi_cmd = app.add_subcommand("phi", "Twist count of a splitting");
  phi_cmd->add_option("--splitting", phi_splitting, "Splitting file")->required();
  phi_cmd->add_option("--ctx", phi_ctx, "Context file")->required();
  phi_cmd->callback([&] {
    action = [&] {
      const RoseSplitting s = io::decode_splitting(io::read_file(phi_splitting));
      const TwistContext ctx = io::decode_context(io::read_file(phi_ctx));
      return Outcome{io::encode(phi(s, ctx))};
    };
  });

  // loop
  RunConfig loop_cfg;
  std::string loop_ctx, loop_file;
  int loop_n = 1;
  auto* loop = app.add_subcommand("loop", "The loops c_N");
  loop->require_subcommand(1);
  auto* loop_build = loop->add_subcommand("build", "Build c_N");
  loop_build->add_option("--N", loop_n, "Loop parameter")->required();
  add_context_options(loop_build, loop_cfg, loop_ctx);
  loop_build->callback([&] {
    action = [&] {
      if (loop_n < 1) throw InputError("N must be positive");
      const TwistContext ctx = load_context(loop_cfg, loop_ctx);
      return Outcome{io::encode(build_cN(ctx.rank(), loop_n, ctx))};
    };
  });
  auto* loop_verify = loop->add_subcommand("verify", "Check consecutive vertices are adjacent");
  loop_verify->add_option("--loop", loop_file, "Loop file")->required();
  loop_verify->callback([&] {
    action = [&] {
      const bool ok = verify_loop(io::decode_loop(io::read_file(loop_file)));
      return Outcome{json{{"result", ok}}, ok};
    };
  });

  // disc
  std::string disc_file, disc_loop, disc_kind = "ffs";
  auto* disc = app.add_subcommand("disc", "Triangulated discs");
  disc->require_subcommand(1);
  auto* disc_verify = disc->add_subcommand("verify", "Check a disc fills a loop");
  disc_verify->add_option("--disc", disc_file, "Disc file")->required();
  disc_verify->add_option("--loop", disc_loop, "Loop file")->required();
  disc_verify->add_option("--kind", disc_kind, "ff | ffs")->capture_default_str();
  disc_verify->callback([&] {
    action = [&] {
      const ComplexKind kind = parse_kind(disc_kind);
      const TriangulatedDisc d = io::decode_disc(io::read_file(disc_file));
      const CombinatorialLoop c = io::decode_loop(io::read_file(disc_loop));
      DiscVerdict v;
      try {
        v = verify_disc(d, c, kind);
      } catch (const MalformedDiscError& e) {
        v = {false, e.what()};
      }
      json doc{{"result", v.ok}};
      if (!v.ok) doc["reason"] = v.reason;
      return Outcome{doc, v.ok};
    };
  });

  // ffn
  RunConfig ffn_cfg;
  std::string ffn_ctx, ffn_s1, ffn_s2;
  int ffn_n = 1;
  auto* ffn = app.add_subcommand("ffn", "Free factor systems");
  ffn->require_subcommand(1);
  auto* ffn_cap = ffn->add_subcommand("cap", "Four-triangle cap of c_N");
  ffn_cap->add_option("--N", ffn_n, "Loop parameter")->required();
  add_context_options(ffn_cap, ffn_cfg, ffn_ctx);
  ffn_cap->callback([&] {
    action = [&] {
      if (ffn_n < 1) throw InputError("N must be positive");
      const TwistContext ctx = load_context(ffn_cfg, ffn_ctx);
      const TriangulatedDisc d = cap_cN_in_FFn(ffn_n, ctx);
      const DiscVerdict v = verify_disc(d, build_cN(ctx.rank(), ffn_n, ctx), ComplexKind::FreeFactorSystems);
      json doc{{"disc", io::encode(d)}, {"triangles", d.triangles.size()}, {"result", v.ok}};
      if (!v.ok) doc["reason"] = v.reason;
      return Outcome{doc, v.ok};
    };
  });
  auto* ffn_leq = ffn->add_subcommand("leq", "Order of free factor systems");
  ffn_leq->add_option("--s1", ffn_s1, "System file")->required();
  ffn_leq->add_option("--s2", ffn_s2, "System file")->required();
  ffn_leq->callback([&] {
    action = [&] {
      const FactorSystem s1 = io::decode_system(io::read_file(ffn_s1));
      const FactorSystem s2 = io::decode_system(io::read_file(ffn_s2));
      return Outcome{json{{"result", ffs_leq(s1, s2)}}};
    };
  });

  // bound
  RunConfig bound_cfg;
  std::string bound_ctx;
  int bound_n = 1;
  auto* bound = app.add_subcommand("bound", "Lower-bound certificate for discs filling c_N");
  bound->add_option("--N", bound_n, "Loop parameter")->required();
  bound->add_option("--samples", bound_cfg.samples, "Link pairs sampled")->capture_default_str();
  bound->add_option("--seed", bound_cfg.seed, "Sampling seed")->capture_default_str();
  add_context_options(bound, bound_cfg, bound_ctx);
  bound->callback([&] {
    action = [&] {
      if (bound_n < 1) throw InputError("N must be positive");
      if (bound_cfg.samples < 1) throw InputError("samples must be positive");
      const TwistContext ctx = load_context(bound_cfg, bound_ctx);
      return Outcome{io::encode(lower_bound_certificate(bound_n, ctx, bound_cfg.samples, bound_cfg.seed))};
    };
  });

  // link
  std::string link_from, link_to, link_a;
  auto* link = app.add_subcommand("link", "Upward links");
  link->require_subcommand(1);
  auto* link_path = link->add_subcommand("path", "Path between two factors containing A");
  link_path->add_option("--from", link_from, "Vertex file")->required();
  link_path->add_option("--to", link_to, "Vertex file")->required();
  link_path->add_option("--A", link_a, "Vertex file")->required();
  link_path->callback([&] {
    action = [&] {
      const FactorVertex x = io::decode_vertex(io::read_file(link_from));
      const FactorVertex y = io::decode_vertex(io::read_file(link_to));
      const FactorVertex a = io::decode_vertex(io::read_file(link_a));
      json path = json::array();
      for (const auto& v : upward_path(x, y, a)) path.push_back(io::encode(v));
      return Outcome{json{{"path", path}, {"length", path.size()}}};
    };
  });

  // folds
  std::string folds_seq, folds_w, folds_gates = "next";
  auto* folds = app.add_subcommand("folds", "Fold sequences between roses");
  folds->require_subcommand(1);
  auto* folds_build = folds->add_subcommand("build", "Compile a fold sequence");
  folds_build->add_option("--seq", folds_seq, "Fold request file")->required();
  auto* folds_diag = folds->add_subcommand("diagnose", "Track the loop of w through a fold sequence");
  folds_diag->add_option("--seq", folds_seq, "Fold request file")->required();
  folds_diag->add_option("--w", folds_w, "The word")->required();
  folds_diag->add_option("--gates", folds_gates, "next | residual")
      ->check(CLI::IsMember({"next", "residual"}))
      ->capture_default_str();
  auto load_sequence = [&] {
    const io::FoldRequest r = io::decode_fold_request(io::read_file(folds_seq));
    return fold_sequence(MarkedGraph::rose(r.source_basis, r.h_petals), r.target_basis);
  };
  folds_build->callback([&] { action = [&, load_sequence] { return Outcome{io::encode(load_sequence())}; }; });
  folds_diag->callback([&] {
    action = [&, load_sequence] {
      const FoldSequence seq = load_sequence();
      const GateRule rule = folds_gates == "residual" ? GateRule::Residual : GateRule::NextFold;
      const auto states = w_core_diagnostic(seq, parse_word(folds_w), rule);
      json js = json::array();
      for (std::size_t i = 0; i < states.size(); ++i) js.push_back(io::encode(states[i], static_cast<int>(i)));
      return Outcome{json{{"states", js}, {"illegal_prefix", illegal_turns_form_prefix(states)}}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Outcome result = action();
    out << result.doc.dump(2) << '\n';
    return result.accepted ? 0 : 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const MathError& e) {
    err << "rejected: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ffc
