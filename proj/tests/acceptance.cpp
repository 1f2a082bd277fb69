// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "ffc/factor_complex.hpp"
#include "ffc/fold_paths.hpp"
#include "ffc/sampling.hpp"
#include "ffc/splittings.hpp"
#include "oracles.hpp"

using namespace ffc;

namespace {

constexpr double kFillingSeconds = 1.0;
constexpr double kPsiSeconds = 5.0;
constexpr double kLoopSeconds = 30.0;
constexpr int kLipschitzSamples = 200;
constexpr int kRefinementSamples = 100;
constexpr int kRefinementBound = 2;
constexpr int kRewriteSamples = 500;
constexpr int kConjugacySamples = 100;
constexpr int kConjugatorLength = 4;
constexpr int kCertificateRounding = 1;
constexpr int kPiSize = 6;
constexpr std::size_t kPiPathEdges = 4;
constexpr int kHyperbolicSamples = 200;
constexpr int kFoldSequences = 60;
constexpr double kPrefixRate = 0.95;
constexpr std::uint64_t kSeed = 20240501;

Word W(const std::string& s) { return parse_word(s); }
const Word kW = parse_word("bbccdd");

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

RoseSplitting random_splitting(std::mt19937_64& rng, int rank, int k) {
  const auto t = random_automorphism_fixing_a(rank, 6, rng);
  std::vector<Word> vertex, loops;
  for (int i = 1; i <= rank; ++i) (i <= k ? vertex : loops).push_back(apply_all(t, letter_word(i)));
  return {vertex, loops};
}

std::vector<Word> to_words(const std::vector<std::string>& xs) {
  std::vector<Word> out;
  for (const auto& x : xs) out.push_back(W(x));
  return out;
}

Result filling_certificates() {
  struct Case {
    const char* word;
    bool expected;
  };
  std::ostringstream detail;
  bool ok = true;
  for (const Case& c : {Case{"bbccdd", true}, Case{"ccbbddcc", true}, Case{"b", false}}) {
    const auto t = Clock::now();
    const bool got = is_filling(W(c.word), 3);
    const double s = seconds_since(t);
    ok = ok && got == c.expected && s < kFillingSeconds;
    detail << c.word << "=" << (got ? "filling" : "not filling") << " (" << s << "s) ";
  }
  return {ok, detail.str()};
}

Result twist_endpoints() {
  const auto t = Clock::now();
  const auto ctx = TwistContext::standard(4, kW, W("b"));
  std::ostringstream detail;
  bool ok = true;
  for (int n : {1, 2, 3, 5, 10, 20}) {
    const auto c = build_cN(4, n, ctx);
    const int p0 = psi(c.vertices[0], ctx);
    const int pn = psi(c.vertices[2], ctx);
    ok = ok && p0 == 0 && pn == n;
    detail << "N=" << n << ":(" << p0 << "," << pn << ") ";
  }
  const double s = seconds_since(t);
  detail << s << "s";
  return {ok && s < kPsiSeconds, detail.str()};
}

Result loop_validity() {
  const auto t = Clock::now();
  const auto ctx4 = TwistContext::standard(4, kW, W("b"));
  const auto ctx3 = TwistContext::standard(3, W("bcBC"), W("b"));
  int bad = 0;
  for (int n = 1; n <= 50; ++n) {
    bad += verify_loop(build_cN(4, n, ctx4)) ? 0 : 1;
    bad += verify_loop(build_cN(3, n, ctx3)) ? 0 : 1;
  }
  const double s = seconds_since(t);
  return {bad == 0 && s < kLoopSeconds, std::to_string(100 - bad) + "/100 loops valid, " + std::to_string(s) + "s"};
}

Result ffn_caps() {
  const auto ctx = TwistContext::standard(4, kW, W("b"));
  int good = 0;
  std::string failure;
  for (int n = 1; n <= 10; ++n) {
    const auto cap = cap_cN_in_FFn(n, ctx);
    const auto v = verify_disc(cap, build_cN(4, n, ctx), ComplexKind::FreeFactorSystems);
    if (cap.triangles.size() == 4 && v.ok)
      ++good;
    else if (failure.empty())
      failure = " first failure N=" + std::to_string(n) + ": " + v.reason;
  }
  return {good == 10, std::to_string(good) + "/10 caps with 4 triangles verified" + failure};
}

Result collapse_lipschitz() {
  const auto ctx = TwistContext::standard(4, kW, W("b"));
  std::mt19937_64 rng(kSeed);
  int samples = 0, within = 0, attempts = 0, worst = 0;
  while (samples < kLipschitzSamples && attempts < 20 * kLipschitzSamples) {
    ++attempts;
    const auto s = random_splitting(rng, 4, 1 + static_cast<int>(rng() % 2));
    const int j = static_cast<int>(rng() % s.loops().size());
    const auto c = collapse_loop(s, j);
    if (translation_length(s, ctx.w()) == 0 || translation_length(c, ctx.w()) == 0) continue;
    ++samples;
    const int d = std::abs(phi(s, ctx).phi - phi(c, ctx).phi);
    worst = std::max(worst, d);
    within += d <= 1 ? 1 : 0;
  }

  const auto ctx3 = TwistContext::standard(3, W("bcBC"), W("b"));
  int refined = 0, refined_ok = 0, refined_worst = 0;
  for (int i = 0; i < kRefinementSamples; ++i) {
    const auto s = random_splitting(rng, 3, 1);
    const int d = std::abs(phi(collapse_loop(s, 1), ctx3).phi - phi(collapse_loop(s, 0), ctx3).phi);
    ++refined;
    refined_ok += d <= kRefinementBound ? 1 : 0;
    refined_worst = std::max(refined_worst, d);
  }
  std::ostringstream detail;
  detail << within << "/" << samples << " collapses with |dPhi|<=1 (max " << worst << "); rank 3 refinement "
         << refined_ok << "/" << refined << " with |dPhi|<=" << kRefinementBound << " (max " << refined_worst << ")";
  return {samples >= kLipschitzSamples && within == samples && refined_ok == refined, detail.str()};
}

Result oracle_equivalences() {
  std::mt19937_64 rng(kSeed + 6);
  int rewrite_ok = 0;
  for (int i = 0; i < kRewriteSamples; ++i) {
    const int rank = 2 + static_cast<int>(rng() % 3);
    const auto basis = oracle::random_basis(rng, rank, static_cast<int>(rng() % 10));
    const std::string w = oracle::random_word(rng, rank, static_cast<int>(rng() % 12));
    const Word v = rewrite_in_basis(W(w), to_words(basis));
    rewrite_ok += oracle::substitute(to_string(v), basis) == w ? 1 : 0;
  }

  int prim_total = 0, prim_ok = 0;
  for (int rank = 2; rank <= 3; ++rank) {
    const auto primitive = oracle::primitive_classes(rank, 4);
    for (int len = 1; len <= 4; ++len)
      for (const auto& raw : oracle::reduced_words(rank, len)) {
        const std::string c = oracle::cyclic_reduce(raw);
        if (c.empty()) continue;
        ++prim_total;
        prim_ok += is_primitive(W(raw), rank) == (primitive.count(oracle::min_rotation(c)) > 0) ? 1 : 0;
      }
  }

  int conj_ok = 0;
  for (int i = 0; i < kConjugacySamples; ++i) {
    const int rank = 2 + static_cast<int>(rng() % 3);
    std::vector<std::string> x;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 2); ++k)
      x.push_back(oracle::random_word(rng, rank, 1 + static_cast<int>(rng() % 3)));
    std::vector<std::string> h;
    if (i % 2 == 0) {
      const std::string g = oracle::random_word(rng, rank, static_cast<int>(rng() % 3));
      const auto prods = oracle::products(x, 2);
      const std::vector<std::string> pool(prods.begin(), prods.end());
      std::string p = pool[rng() % pool.size()];
      if (p.empty()) p = x[0];
      h.push_back(oracle::reduce(g + p + oracle::inverse(g)));
    } else {
      h.push_back(oracle::random_word(rng, rank, 1 + static_cast<int>(rng() % 4)));
    }
    const bool expected = oracle::conjugator_search(h, x, rank, kConjugatorLength).has_value();
    conj_ok += is_conjugate_into(to_words(h), to_words(x)) == expected ? 1 : 0;
  }
  std::ostringstream detail;
  detail << "rewrite " << rewrite_ok << "/" << kRewriteSamples << ", primitive " << prim_ok << "/" << prim_total
         << ", conjugate-into " << conj_ok << "/" << kConjugacySamples;
  return {rewrite_ok == kRewriteSamples && prim_ok == prim_total && conj_ok == kConjugacySamples, detail.str()};
}

Result certificate_growth() {
  const auto ctx = TwistContext::standard(4, kW, W("b"));
  std::ostringstream detail;
  int prev = 0;
  bool monotone = true;
  int t10 = 0, t40 = 0;
  for (int n : {5, 10, 20, 40}) {
    const auto c = lower_bound_certificate(n, ctx, 200, kSeed);
    monotone = monotone && c.min_triangles >= prev;
    prev = c.min_triangles;
    if (n == 10) t10 = c.min_triangles;
    if (n == 40) t40 = c.min_triangles;
    detail << "N=" << n << ":" << c.min_triangles << " (C=" << c.empirical_lipschitz << ") ";
  }
  const bool doubles = t40 >= 2 * t10 - kCertificateRounding;
  return {monotone && doubles, detail.str()};
}

Result pi_connectivity() {
  const auto rose = MarkedGraph::rose(to_words({"a", "b", "c", "d"}), 1);
  const auto a = FactorVertex::certify({W("a")}, 4);
  const auto pi = pi_of(rose);
  std::size_t longest = 0;
  int verified = 0, pairs = 0;
  for (const auto& p : pi)
    for (const auto& q : pi) {
      ++pairs;
      const auto path = pi_diameter_path(rose, p.vertex, q.vertex);
      bool ok = same_vertex(path.front(), p.vertex) && same_vertex(path.back(), q.vertex);
      for (std::size_t i = 0; i < path.size(); ++i) {
        ok = ok && conjugate_into(a, path[i]);
        if (i + 1 < path.size()) ok = ok && adjacent(path[i], path[i + 1]);
      }
      longest = std::max(longest, path.size() - 1);
      verified += ok && path.size() - 1 <= kPiPathEdges ? 1 : 0;
    }
  std::ostringstream detail;
  detail << "|Pi|=" << pi.size() << ", " << verified << "/" << pairs << " paths verified, longest " << longest;
  return {static_cast<int>(pi.size()) == kPiSize && verified == pairs, detail.str()};
}

Result hyperbolicity() {
  std::mt19937_64 rng(kSeed + 9);
  int hyperbolic = 0, min_tau = 1 << 30;
  for (int i = 0; i < kHyperbolicSamples; ++i) {
    const auto s = random_splitting(rng, 4, 2 + static_cast<int>(rng() % 2));
    const int tau = translation_length(s, kW);
    hyperbolic += tau >= 1 ? 1 : 0;
    min_tau = std::min(min_tau, tau);
  }
  return {hyperbolic == kHyperbolicSamples,
          std::to_string(hyperbolic) + "/" + std::to_string(kHyperbolicSamples) + " hyperbolic, min tau " +
              std::to_string(min_tau)};
}

std::string flags(const std::vector<WCoreState>& states) {
  std::string out;
  for (const auto& s : states) out.push_back(s.has_illegal_turn ? 'I' : '.');
  return out;
}

Result fold_prefix() {
  std::mt19937_64 rng(kSeed + 10);
  const auto rose = MarkedGraph::rose(to_words({"a", "b", "c", "d"}), 1);
  int runs = 0, prefix = 0, residual_prefix = 0;
  std::ostringstream log;
  while (runs < kFoldSequences) {
    const auto t = random_automorphism_fixing_a(4, 6, rng);
    std::vector<Word> target;
    for (int i = 1; i <= 4; ++i) target.push_back(apply_all(t, letter_word(i)));
    const auto seq = fold_sequence(rose, target);
    if (seq.stages.empty()) continue;
    ++runs;
    const auto states = w_core_diagnostic(seq, kW, GateRule::NextFold);
    if (illegal_turns_form_prefix(states)) {
      ++prefix;
    } else {
      log << "    violation: target (";
      for (std::size_t i = 0; i < target.size(); ++i) log << (i ? "," : "") << to_string(target[i]);
      log << ") illegal steps " << flags(states) << "\n";
    }
    residual_prefix += illegal_turns_form_prefix(w_core_diagnostic(seq, kW, GateRule::Residual)) ? 1 : 0;
  }
  const double rate = static_cast<double>(prefix) / runs;
  std::ostringstream detail;
  detail << prefix << "/" << runs << " prefix under next-fold gates (need " << kPrefixRate * 100
         << "%); residual-map gates " << residual_prefix << "/" << runs << " (informational)\n"
         << log.str();
  return {rate >= kPrefixRate, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"filling certificates", filling_certificates},
      {"twist endpoints", twist_endpoints},
      {"loop validity", loop_validity},
      {"free factor system caps", ffn_caps},
      {"collapse Lipschitz", collapse_lipschitz},
      {"oracle equivalences", oracle_equivalences},
      {"certificate growth", certificate_growth},
      {"Pi and connectivity", pi_connectivity},
      {"hyperbolicity sweep", hyperbolicity},
      {"fold prefix diagnostics", fold_prefix},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t = Clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += r.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %-26s [%.2fs] %s\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first,
                seconds_since(t), r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
