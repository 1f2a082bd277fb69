#include "ffc/json_io.hpp"

#include <fstream>

#include "ffc/errors.hpp"

namespace ffc::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad ") + what + ": " + e.what());
  }
}

const char* kind_name(NielsenMove::Kind k) {
  switch (k) {
    case NielsenMove::Kind::Swap:
      return "swap";
    case NielsenMove::Kind::Invert:
      return "invert";
    case NielsenMove::Kind::RightMultiply:
      return "right_multiply";
    case NielsenMove::Kind::LeftMultiply:
      return "left_multiply";
  }
  return "";
}

}  // namespace

json encode(const std::vector<Word>& words) {
  json out = json::array();
  for (const auto& w : words) out.push_back(to_string(w));
  return out;
}

Word decode_word(const json& j) {
  return guarded("word", [&] { return parse_word(j.get<std::string>()); });
}

std::vector<Word> decode_words(const json& j) {
  return guarded("word list", [&] {
    std::vector<Word> out;
    if (!j.is_array()) throw InputError("expected a list of words");
    for (const auto& x : j) out.push_back(decode_word(x));
    return out;
  });
}

json encode(const CoreGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"label", to_string(e.label)}});
  json out{{"vertices", g.vertex_count()}, {"edges", edges}};
  out["basepoint"] = g.basepoint() ? json(*g.basepoint()) : json(nullptr);
  return out;
}

CoreGraph decode_core_graph(const json& j) {
  return guarded("core graph", [&] {
    std::vector<CoreGraph::Edge> edges;
    for (const auto& e : j.at("edges")) {
      const Word label = decode_word(e.at("label"));
      if (label.size() != 1 || label[0] < 0) throw InputError("edge label must be a single generator");
      edges.push_back({e.at("from").get<int>(), e.at("to").get<int>(), label[0]});
    }
    std::optional<int> base;
    if (j.contains("basepoint") && !j.at("basepoint").is_null()) base = j.at("basepoint").get<int>();
    return CoreGraph::from_edges(j.at("vertices").get<int>(), std::move(edges), base);
  });
}

json encode(const NielsenTranscript& t) {
  json out = json::array();
  for (const auto& m : t) out.push_back({{"move", kind_name(m.kind)}, {"i", m.i}, {"j", m.j}, {"sign", m.sign}});
  return out;
}

json encode(const RoseSplitting& s) {
  return {{"vertex_basis", encode(s.vertex_basis())}, {"loops", encode(s.loops())}};
}

RoseSplitting decode_splitting(const json& j) {
  return guarded("splitting", [&] {
    return RoseSplitting(decode_words(j.at("vertex_basis")), decode_words(j.at("loops")));
  });
}

json encode(const TwistContext& ctx) {
  return {{"A", encode(ctx.a())}, {"B", encode(ctx.b_factor())}, {"w", to_string(ctx.w())}, {"b", to_string(ctx.b())}};
}

TwistContext decode_context(const json& j) {
  return guarded("context", [&] {
    return TwistContext(decode_words(j.at("A")), decode_words(j.at("B")), decode_word(j.at("w")),
                        decode_word(j.at("b")));
  });
}

json encode(const PhiReport& r) {
  return {{"phi", r.phi}, {"tau", r.tau}, {"overlap_edges", r.overlap_edges}, {"leg_edges", r.leg_edges}};
}

json encode(const TreePath& p, const RoseSplitting& s) {
  json vertices = json::array();
  for (const auto& v : p.vertices(s)) vertices.push_back(to_string(v));
  json edges = json::array();
  for (const auto& e : p.edges)
    edges.push_back({{"source", to_string(e.source(s))}, {"loop", e.loop}, {"sign", e.sign}});
  return {{"vertices", vertices}, {"edges", edges}, {"length", p.length()}};
}

json encode(const FactorVertex& v) {
  return {{"generators", encode(v.generators())}, {"ambient_extension", encode(v.extension())}};
}

FactorVertex decode_vertex(const json& j) {
  return guarded("factor vertex", [&] {
    auto gens = decode_words(j.at("generators"));
    if (j.contains("ambient_extension") && !j.at("ambient_extension").is_null())
      return FactorVertex::with_extension(std::move(gens), decode_words(j.at("ambient_extension")));
    return FactorVertex::certify(std::move(gens), j.at("rank").get<int>());
  });
}

json encode(const CombinatorialLoop& c) {
  json vs = json::array();
  for (const auto& v : c.vertices) vs.push_back(encode(v));
  return {{"vertices", vs}};
}

CombinatorialLoop decode_loop(const json& j) {
  return guarded("loop", [&] {
    CombinatorialLoop c;
    for (const auto& v : j.at("vertices")) c.vertices.push_back(decode_vertex(v));
    return c;
  });
}

json encode(const FactorSystem& s) {
  json cs = json::array();
  for (const auto& c : s.components()) cs.push_back(encode(c));
  return {{"components", cs}, {"joint_basis", encode(s.joint_basis())}};
}

FactorSystem decode_system(const json& j) {
  return guarded("factor system", [&] {
    if (j.contains("generators")) return FactorSystem(decode_vertex(j));
    std::vector<FactorVertex> cs;
    for (const auto& c : j.at("components")) cs.push_back(decode_vertex(c));
    return FactorSystem(std::move(cs), decode_words(j.at("joint_basis")));
  });
}

json encode(const TriangulatedDisc& d) {
  json labels = json::array();
  for (const auto& l : d.labels) labels.push_back(encode(l));
  return {{"vertices", d.vertex_count}, {"triangles", d.triangles}, {"boundary", d.boundary}, {"labels", labels}};
}

TriangulatedDisc decode_disc(const json& j) {
  return guarded("disc", [&] {
    TriangulatedDisc d;
    d.vertex_count = j.at("vertices").get<int>();
    d.triangles = j.at("triangles").get<std::vector<std::array<int, 3>>>();
    d.boundary = j.at("boundary").get<std::vector<int>>();
    for (const auto& l : j.at("labels")) d.labels.push_back(decode_system(l));
    return d;
  });
}

json encode(const BoundCertificate& c) {
  return {{"N", c.n},
          {"psi_A0", c.psi_a0},
          {"psi_AN", c.psi_an},
          {"empirical_lipschitz_C", c.empirical_lipschitz},
          {"max_observed_jump", c.max_observed_jump},
          {"min_path_length", c.min_path_length},
          {"min_triangles", c.min_triangles},
          {"samples", c.samples},
          {"valid_samples", c.valid_samples},
          {"seed", c.seed}};
}

json encode(const FoldRequest& r) {
  return {{"source_basis", encode(r.source_basis)}, {"target_basis", encode(r.target_basis)}, {"h_petals", r.h_petals}};
}

FoldRequest decode_fold_request(const json& j) {
  return guarded("fold request", [&] {
    FoldRequest r{decode_words(j.at("source_basis")), decode_words(j.at("target_basis")), 1};
    if (j.contains("h_petals")) r.h_petals = j.at("h_petals").get<int>();
    return r;
  });
}

json encode(const FoldSequence& s) {
  json stages = json::array();
  for (const auto& st : s.stages) {
    json marking = json::array();
    for (const auto& e : st.folded.edges()) marking.push_back(to_string(e.label));
    stages.push_back({{"move", encode(NielsenTranscript{st.move})[0]},
                      {"fold",
                       {{"first", {{"edge", st.fold.first.edge}, {"start", st.fold.first.start}}},
                        {"second", {{"edge", st.fold.second.edge}, {"start", st.fold.second.start}}}}},
                      {"touches_h", st.touches_h},
                      {"marking_after", marking}});
  }
  return {{"stages", stages}, {"count", s.stages.size()}};
}

json encode(const WCoreState& s, int step) {
  return {{"step", step},
          {"illegal", s.has_illegal_turn},
          {"core_len", s.core_length},
          {"legal_run", s.max_legal_run},
          {"phase", s.phase}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace ffc::io
