#pragma once

// JSON encodings of the library's values. Words are codec strings. Decoders
// throw InputError on malformed documents.

#include <string>
#include <vector>

#include <json.hpp>

#include "ffc/factor_complex.hpp"
#include "ffc/fold_paths.hpp"
#include "ffc/splittings.hpp"
#include "ffc/stallings.hpp"

namespace ffc::io {

using nlohmann::json;

json encode(const std::vector<Word>& words);
std::vector<Word> decode_words(const json& j);
Word decode_word(const json& j);

json encode(const CoreGraph& g);
CoreGraph decode_core_graph(const json& j);

json encode(const NielsenTranscript& t);

json encode(const RoseSplitting& s);
RoseSplitting decode_splitting(const json& j);

json encode(const TwistContext& ctx);
TwistContext decode_context(const json& j);

json encode(const PhiReport& r);
json encode(const TreePath& p, const RoseSplitting& s);

json encode(const FactorVertex& v);
FactorVertex decode_vertex(const json& j);

json encode(const CombinatorialLoop& c);
CombinatorialLoop decode_loop(const json& j);

json encode(const FactorSystem& s);
FactorSystem decode_system(const json& j);

json encode(const TriangulatedDisc& d);
TriangulatedDisc decode_disc(const json& j);

json encode(const BoundCertificate& c);

// {"source_basis": [...], "target_basis": [...], "h_petals": k}
struct FoldRequest {
  std::vector<Word> source_basis;
  std::vector<Word> target_basis;
  int h_petals = 1;
};
json encode(const FoldRequest& r);
FoldRequest decode_fold_request(const json& j);
json encode(const FoldSequence& s);

json encode(const WCoreState& s, int step);

json read_file(const std::string& path);

}  // namespace ffc::io
