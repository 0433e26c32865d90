// Copyright 2026 The falsealarm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fa/audio.hpp"
#include "fa/errors.hpp"
#include "fa/estimator.hpp"
#include "fa/metrics.hpp"
#include "fa/pipeline.hpp"
#include "fa/random.hpp"
#include "fa/textnorm.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using fa::textnorm::TokenSequence;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects the first few failure messages of a check.
class Checker {
 public:
  void Expect(bool cond, const std::string& what) {
    if (cond) return;
    ok_ = false;
    if (++failures_ <= 3) detail_ += (detail_.empty() ? "" : "; ") + what;
  }
  Outcome Done(const std::string& summary) const {
    std::string d = summary;
    if (!ok_) d += " | " + detail_ + (failures_ > 3 ? " (+" + std::to_string(failures_ - 3) + " more)" : "");
    return {ok_, d};
  }

 private:
  bool ok_ = true;
  int failures_ = 0;
  std::string detail_;
};

int g_failed = 0;

void Report(const std::string& name, const std::function<Outcome()>& fn) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.ok) ++g_failed;
  std::printf("%s  %-34s %s [%.2fs]\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

// ------------------------------------------------------------------ WER

TokenSequence Symbols(const std::vector<int>& v) {
  TokenSequence t;
  for (int x : v) t.push_back(std::string(1, static_cast<char>('a' + x)));
  return t;
}

// Every alignment is a monotone partial matching between reference and
// hypothesis positions; unmatched reference words are deletions, unmatched
// hypothesis words insertions, matched unequal pairs substitutions. All
// matchings for an (n, m) shape are listed once, largest first.
struct Matching {
  int k = 0;
  std::array<std::uint8_t, 12> pairs{};  // (i, j) for each matched pair
};

struct MatchingTable {
  std::vector<Matching> by_shape[7][7];
};

void EnumerateMatchings(int n, int m, int i, int j, Matching& cur, std::vector<Matching>& out) {
  out.push_back(cur);
  for (int a = i; a < n; ++a)
    for (int b = j; b < m; ++b) {
      cur.pairs[static_cast<std::size_t>(2 * cur.k)] = static_cast<std::uint8_t>(a);
      cur.pairs[static_cast<std::size_t>(2 * cur.k + 1)] = static_cast<std::uint8_t>(b);
      ++cur.k;
      EnumerateMatchings(n, m, a + 1, b + 1, cur, out);
      --cur.k;
    }
}

// Minimal total cost, plus a bitmask of the matching sizes k that reach it.
// For a fixed k, I = m - k and D = n - k, so k identifies the (I, D, S)
// triple. A matching of size k costs at least n + m - 2k; the list is sorted
// by k descending, so the scan stops once that bound exceeds the best cost.
std::pair<int, unsigned> BruteForce(const std::vector<int>& ref, const std::vector<int>& hyp,
                                    const MatchingTable& table) {
  const int n = static_cast<int>(ref.size()), m = static_cast<int>(hyp.size());
  std::array<std::array<int, 6>, 6> differ{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) differ[i][j] = ref[i] != hyp[j];
  int best = n + m + 1;
  unsigned ks = 0;
  for (const auto& mt : table.by_shape[n][m]) {
    if (n + m - 2 * mt.k > best) break;
    int s = 0;
    for (int p = 0; p < mt.k; ++p) s += differ[mt.pairs[2 * p]][mt.pairs[2 * p + 1]];
    const int cost = n + m - 2 * mt.k + s;
    if (cost < best) {
      best = cost;
      ks = 0;
    }
    if (cost == best) ks |= 1u << mt.k;
  }
  return {best, ks};
}

// Independent textbook DP (distance only).
int ReferenceDistance(const TokenSequence& r, const TokenSequence& h) {
  std::vector<int> prev(h.size() + 1), cur(h.size() + 1);
  for (std::size_t j = 0; j <= h.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= r.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= h.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[h.size()];
}

// Calls fn on every sequence of length `len` in restricted-growth form over
// at most 5 symbols: each symbol is at most one more than the largest seen.
// Alignment only compares symbols for equality, so relabeling the alphabet
// cannot change the result and these representatives cover all 5^len pairs.
void RestrictedGrowth(int len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> seq(static_cast<std::size_t>(len));
  std::function<void(int, int)> rec = [&](int pos, int max_used) {
    if (pos == len) {
      fn(seq);
      return;
    }
    for (int s = 0; s <= std::min(max_used + 1, 4); ++s) {
      seq[static_cast<std::size_t>(pos)] = s;
      rec(pos + 1, std::max(max_used, s));
    }
  };
  rec(0, -1);
}

Outcome WerOracle() {
  const auto start = Clock::now();
  MatchingTable table;
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m) {
      Matching cur;
      auto& list = table.by_shape[n][m];
      EnumerateMatchings(n, m, 0, 0, cur, list);
      std::stable_sort(list.begin(), list.end(), [](const Matching& x, const Matching& y) { return x.k > y.k; });
    }
  Checker c;
  std::int64_t pairs = 0, mismatches = 0;
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m)
      RestrictedGrowth(n + m, [&](const std::vector<int>& joint) {
        const std::vector<int> ref(joint.begin(), joint.begin() + n), hyp(joint.begin() + n, joint.end());
        ++pairs;
        const TokenSequence r = Symbols(ref), h = Symbols(hyp);
        if (n == 0) {
          bool threw = false;
          try {
            fa::metrics::Align(r, h);
          } catch (const fa::UndefinedRatioError&) {
            threw = true;
          }
          if (!threw) ++mismatches;
          c.Expect(threw, "empty reference did not raise");
          return;
        }
        const auto b = fa::metrics::Align(r, h);
        const auto [best, ks] = BruteForce(ref, hyp, table);
        const auto k = static_cast<int>(n - b.deletions);
        const bool ok = b.errors() == best && b.reference_length == n && k >= 0 && ((ks >> k) & 1u) != 0 &&
                        b.insertions == m - k;
        if (!ok) {
          ++mismatches;
          c.Expect(false, "pair n=" + std::to_string(n) + " m=" + std::to_string(m) + " cost " +
                              std::to_string(b.errors()) + " vs brute force " + std::to_string(best));
        }
      });

  fa::Rng rng(20261019);
  int random_mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = 1 + fa::UniformIndex(rng, 40), m = fa::UniformIndex(rng, 40);
    const auto alphabet = 2 + fa::UniformIndex(rng, 8);
    TokenSequence r, h;
    for (std::uint64_t i = 0; i < n; ++i) r.push_back("w" + std::to_string(fa::UniformIndex(rng, alphabet)));
    for (std::uint64_t i = 0; i < m; ++i) h.push_back("w" + std::to_string(fa::UniformIndex(rng, alphabet)));
    const auto b = fa::metrics::Align(r, h);
    const bool ok = b.errors() == ReferenceDistance(r, h) &&
                    b.insertions - b.deletions == static_cast<std::int64_t>(m) - static_cast<std::int64_t>(n);
    if (!ok) ++random_mismatches;
    c.Expect(ok, "random pair " + std::to_string(t) + " disagrees with reference DP");
  }
  const double secs = Seconds(start);
  c.Expect(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
  return c.Done(std::to_string(pairs) + " canonical pairs, " + std::to_string(mismatches) + " mismatches; 1000 random, " +
                std::to_string(random_mismatches) + " mismatches");
}

// ------------------------------------------------------------------ Eq. 2

Outcome WerGoldens() {
  Checker c;
  const TokenSequence ref{"the", "cat", "sat"};
  const auto id = fa::metrics::Align(ref, ref);
  c.Expect(fa::metrics::Wer(id) == 0.0, "identity is not 0");
  const auto empty = fa::metrics::Align(ref, {});
  c.Expect(fa::metrics::Wer(empty) == 1.0 && empty.deletions == 3, "empty hypothesis is not 1");
  const auto sub = fa::metrics::Align(ref, {"the", "hat", "sat"});
  const auto frac = fa::metrics::WerFraction(sub);
  c.Expect(sub.substitutions == 1 && sub.errors() == 1, "expected exactly one substitution");
  c.Expect(frac.numerator == 1 && frac.denominator == 3, "fraction is not exactly 1/3");
  c.Expect(fa::metrics::Wer(sub) == 1.0 / 3.0, "value is not the double nearest 1/3");
  return c.Done("identity 0, empty hypothesis 1, one substitution in three words = 1/3");
}

// ------------------------------------------------------------------ normalization

std::string EncodeUtf8(char32_t cp) {
  std::string s;
  if (cp < 0x80) {
    s += static_cast<char>(cp);
  } else if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (cp >> 18));
    s += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return s;
}

std::string RandomUnicode(fa::Rng& rng) {
  static const std::vector<std::string> pieces{"Mr", "Mrs.", "Dr.", "St", "etc.", "'", "’", "-", "  ", ".",
                                               "1",  "42",   "007", "1000000000000", "don't", "O'Neil", "\t",
                                               "\n", "café", "½", "Ⅰ"};
  std::string s;
  const auto parts = fa::UniformIndex(rng, 25);
  for (std::uint64_t k = 0; k < parts; ++k) {
    switch (fa::UniformIndex(rng, 6)) {
      case 0:
        s += pieces[fa::UniformIndex(rng, pieces.size())];
        break;
      case 1:
        s += static_cast<char>(0x20 + fa::UniformIndex(rng, 95));
        break;
      case 2:
        s += EncodeUtf8(static_cast<char32_t>(0x80 + fa::UniformIndex(rng, 0x780)));
        break;
      case 3: {
        char32_t cp;
        do cp = static_cast<char32_t>(0x800 + fa::UniformIndex(rng, 0x10000 - 0x800));
        while (cp >= 0xD800 && cp < 0xE000);
        s += EncodeUtf8(cp);
        break;
      }
      case 4:
        s += EncodeUtf8(static_cast<char32_t>(0x10000 + fa::UniformIndex(rng, 0x100000)));
        break;
      default:
        s += static_cast<char>('a' + fa::UniformIndex(rng, 26));
        break;
    }
  }
  return s;
}

Outcome Normalization() {
  using fa::textnorm::Join;
  using fa::textnorm::NormalizeText;
  Checker c;
  auto golden = [&](const std::string& in, const std::string& want) {
    const std::string got = Join(NormalizeText(in));
    c.Expect(got == want, "'" + in + "' -> '" + got + "', want '" + want + "'");
  };
  golden("Mr", "mister");
  golden("Mr. Smith", "mister smith");
  golden("1", "one");
  golden("I have 21 cats", "i have twenty one cats");
  golden("Don't stop", "don't stop");
  golden("It’s fine", "it's fine");
  golden("Route 66, 2nd exit", "route sixty six two nd exit");
  golden("HELLO, World!", "hello world");
  golden("well-known", "well known");
  golden("", "");
  for (const std::string s : {"1", "ninety 9", "0", "2024 was 1 year"})
    for (const auto& tok : NormalizeText(s))
      c.Expect(std::none_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }),
               "digit survived in '" + s + "'");

  fa::Rng rng(99);
  int not_idempotent = 0, invalid = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::string s = RandomUnicode(rng);
    const auto once = NormalizeText(s);
    const auto twice = NormalizeText(Join(once));
    if (once != twice) {
      ++not_idempotent;
      c.Expect(false, "not idempotent on case " + std::to_string(t));
    }
    for (const auto& tok : once)
      if (!fa::textnorm::IsNormalizedToken(tok)) {
        ++invalid;
        c.Expect(false, "bad token '" + tok + "'");
      }
  }
  return c.Done("goldens ok; 10000 random strings, " + std::to_string(not_idempotent) + " non-idempotent, " +
                std::to_string(invalid) + " invalid tokens");
}

// ------------------------------------------------------------------ truth tables

std::vector<bool> Bits(unsigned mask, int count) {
  std::vector<bool> v;
  for (int k = 0; k < count; ++k) v.push_back(((mask >> k) & 1u) != 0);
  return v;
}

Outcome CrossAsrTable() {
  using fa::pipeline::CaseOutcome;
  Checker c;
  int rows = 0;
  std::set<CaseOutcome> seen;
  for (int k = 1; k <= 4; ++k)
    for (unsigned mask = 0; mask < (1u << (k + 1)); ++mask) {
      const bool ut = mask & 1u;
      const auto others = Bits(mask >> 1, k);
      const bool any_other = std::find(others.begin(), others.end(), true) != others.end();
      const CaseOutcome want = ut ? CaseOutcome::kSuccess
                                  : (any_other ? CaseOutcome::kFailed : CaseOutcome::kIndeterminable);
      const CaseOutcome got = fa::pipeline::ClassifyCrossAsr(ut, others);
      seen.insert(got);
      ++rows;
      c.Expect(got == want, "row k=" + std::to_string(k) + " mask=" + std::to_string(mask));
    }
  c.Expect(seen.size() == 3, "not all three outcomes produced");
  bool threw = false;
  try {
    fa::pipeline::ClassifyCrossAsr(true, {});
  } catch (const fa::ConfigError&) {
    threw = true;
  }
  c.Expect(threw, "no cross-references accepted");
  return c.Done(std::to_string(rows) + " rows, 3 outcome classes");
}

Outcome FalseAlarmTable() {
  using fa::pipeline::CaseOutcome;
  using fa::pipeline::FalseAlarmStatus;
  Checker c;
  int rows = 0;
  for (int k = 1; k <= 4; ++k)
    for (unsigned mask = 0; mask < (1u << (k + 2)); ++mask) {
      const bool human = mask & 1u, tts = mask & 2u;
      const auto others = Bits(mask >> 2, k);
      const bool other_failed = std::find(others.begin(), others.end(), false) != others.end();
      FalseAlarmStatus want = FalseAlarmStatus::kNotApplicable;
      if (human && !tts) want = other_failed ? FalseAlarmStatus::kConfirmed : FalseAlarmStatus::kPotentialUnconfirmed;
      const auto got = fa::pipeline::DetermineFalseAlarm(human, tts, others);
      ++rows;
      c.Expect(got == want, "row k=" + std::to_string(k) + " mask=" + std::to_string(mask));
      if (got == FalseAlarmStatus::kConfirmed)
        c.Expect(fa::pipeline::ClassifyCrossAsr(tts, others) != CaseOutcome::kSuccess, "Confirmed with Success");
    }
  return c.Done(std::to_string(rows) + " rows; Confirmed never with Success");
}

// ------------------------------------------------------------------ end to end

Outcome ScriptedEndToEnd() {
  const auto start = Clock::now();
  Checker c;
  const fs::path root = fa_test::FreshDir("accept-e2e");
  const auto scenario = fa_test::BuildScenario(root / "corpus");

  fa_test::RunScenario(scenario, root / "full", 4);
  const auto full = fa_test::SummarizeScenario(root / "full");
  const auto& cell = full.cells.at({"tts", "sut"});
  c.Expect(cell.executed == 100, "executed " + std::to_string(cell.executed));
  c.Expect(cell.confirmed == fa_test::Scenario::kConfirmed, "confirmed " + std::to_string(cell.confirmed));
  c.Expect(cell.fa_rate == 0.17, "rate " + std::to_string(cell.fa_rate));
  c.Expect(cell.potential_unconfirmed == fa_test::Scenario::kPotentialUnconfirmed, "potential count");
  c.Expect(cell.failed == fa_test::Scenario::kFailed && cell.indeterminable == fa_test::Scenario::kIndeterminable &&
               cell.success == fa_test::Scenario::kSuccess && cell.engine_error == 0,
           "outcome counts");

  const auto first = fa_test::RunScenario(scenario, root / "resumed", 3, 37);
  c.Expect(first.executed == 37, "interrupted run executed " + std::to_string(first.executed));
  const auto second = fa_test::RunScenario(scenario, root / "resumed", 2);
  c.Expect(second.skipped == 37 && second.executed == 63, "resume did not skip the finished cases");
  const auto resumed = fa_test::SummarizeScenario(root / "resumed");
  c.Expect(fa::pipeline::SummaryToJson(resumed) == fa::pipeline::SummaryToJson(full), "resumed summary differs");
  c.Expect(fa::pipeline::SummaryToText(resumed) == fa::pipeline::SummaryToText(full), "resumed table differs");

  fs::remove_all(root);
  const double secs = Seconds(start);
  c.Expect(secs < 60.0, "runtime over 60s");
  return c.Done("confirmed " + std::to_string(cell.confirmed) + ", rate " + std::to_string(cell.fa_rate) +
                "; resumed summary identical");
}

// ------------------------------------------------------------------ tokenizer

Outcome TokenizerGoldens() {
  namespace est = fa::estimator;
  Checker c;
  const std::vector<TokenSequence> corpus{{"the", "cat", "of", "the", "hat"}, {"of", "the", "sea"}, {"the", "end"}};
  const auto v = est::Vocabulary::Build(corpus);
  c.Expect(v.IdOf("the") == 1, "'the' is not 1");
  c.Expect(v.IdOf("of") == 2, "'of' is not 2");
  c.Expect(v.IdOf("cat") == 3 && v.IdOf("hat") == 4 && v.IdOf("sea") == 5 && v.IdOf("end") == 6,
           "ties not broken by first occurrence");
  c.Expect(v.oov_id() == 7 && v.IdOf("zebra") == 7, "OOV index is not V+1");
  const auto enc = v.Encode({"the", "zebra", "of"}, 6);
  c.Expect(enc == std::vector<int>{1, 7, 2, 0, 0, 0}, "padding/encoding golden");
  c.Expect(v.Encode({}, 4) == std::vector<int>(4, 0), "empty text");
  c.Expect(v.Encode({"the", "cat", "of", "hat"}, 2) == std::vector<int>{1, 3}, "truncation");

  const auto sizes = est::SplitSizesFor(21925);
  c.Expect(sizes.train == 13156 && sizes.validation == 2192 && sizes.test == 6577,
           "split " + std::to_string(sizes.train) + "/" + std::to_string(sizes.validation) + "/" +
               std::to_string(sizes.test));
  std::vector<est::EncodedExample> ex(21925);
  for (std::size_t i = 0; i < ex.size(); ++i) ex[i].text_id = std::to_string(i);
  const auto split = est::SplitDataset(ex, 7);
  c.Expect(split.train.size() == 13156 && split.validation.size() == 2192 && split.test.size() == 6577,
           "SplitDataset sizes");
  return c.Done("(\"the\",1), (\"of\",2); zero suffix padding; split 13156/2192/6577");
}

Outcome Labeling() {
  Checker c;
  const auto labels = fa::estimator::LabelTexts({{"a", 11}, {"b", 10}, {"c", 0}, {"d", 20}}, 20);
  std::map<std::string, int> got;
  for (const auto& l : labels) got[l.text_id] = l.label;
  c.Expect(got["a"] == 1, "11 of 20 is not 1");
  c.Expect(got["b"] == 0, "10 of 20 is not 0");
  c.Expect(got["c"] == 0 && got["d"] == 1, "edge counts");
  bool threw = false;
  try {
    fa::estimator::LabelTexts({{"x", 21}}, 20);
  } catch (const fa::LabelingError&) {
    threw = true;
  }
  c.Expect(threw, "count above K accepted");
  return c.Done("K=20: 11 -> 1, 10 -> 0");
}

// ------------------------------------------------------------------ gradients

Outcome GradientCheck() {
  namespace est = fa::estimator;
  const auto start = Clock::now();
  Checker c;
  constexpr int V = 20, E = 4, H = 5, T = 7, B = 3;
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  fa::Rng rng(424242);
  const char* const groups[] = {"embedding", "lower W", "lower U", "lower b", "upper W",
                                "upper U",   "upper b", "head w",  "head b"};
  for (int inst = 0; inst < 20; ++inst) {
    est::Model model(V, E, H);
    auto& p = model.params();
    std::vector<double> flat(static_cast<std::size_t>(p.size()));
    for (auto& x : flat) x = (2.0 * fa::UniformUnit(rng) - 1.0) * 0.8;
    p.Unflatten(Eigen::Map<est::VectorX<double>>(flat.data(), static_cast<Eigen::Index>(flat.size())));

    est::TokenBatch tokens(T, B);
    est::VectorX<double> labels(B);
    for (int b = 0; b < B; ++b) {
      const auto len = 1 + fa::UniformIndex(rng, T);
      for (int t = 0; t < T; ++t)
        tokens(t, b) = static_cast<std::uint64_t>(t) < len ? 1 + static_cast<int>(fa::UniformIndex(rng, V + 1)) : 0;
      labels(b) = static_cast<double>(fa::UniformIndex(rng, 2));
    }
    auto grad = est::ClassifierParams<double>::Zero(V + 2, E, H);
    model.LossAndGradient(tokens, labels, &grad);
    const est::VectorX<double> analytic = grad.Flatten();

    est::VectorX<double> theta = p.Flatten();
    est::VectorX<double> numeric(theta.size());
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double orig = theta(k);
      theta(k) = orig + kStep;
      p.Unflatten(theta);
      const double up = model.Loss(tokens, labels);
      theta(k) = orig - kStep;
      p.Unflatten(theta);
      const double down = model.Loss(tokens, labels);
      theta(k) = orig;
      numeric(k) = (up - down) / (2.0 * kStep);
    }
    p.Unflatten(theta);

    // Group-wise relative error ||a - n|| / max(||a||, ||n||).
    std::vector<Eigen::Index> bounds{0};
    est::ClassifierParams<double>::VisitBlocks(p, [&](const auto& m) { bounds.push_back(bounds.back() + m.size()); });
    bounds.push_back(bounds.back() + 1);
    for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
      const auto len = bounds[g + 1] - bounds[g];
      const est::VectorX<double> a = analytic.segment(bounds[g], len), n = numeric.segment(bounds[g], len);
      const double scale = std::max(a.norm(), n.norm());
      if (scale < 1e-10) continue;  // row-0 style all-zero blocks
      const double rel = (a - n).norm() / scale;
      worst = std::max(worst, rel);
      c.Expect(rel <= 1e-3, std::string(groups[g]) + " rel " + std::to_string(rel) + " instance " +
                                std::to_string(inst));
    }
  }
  const double secs = Seconds(start);
  c.Expect(secs < 60.0, "runtime over 60s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "20 instances, 9 parameter groups, worst relative error %.2e", worst);
  return c.Done(buf);
}

// ------------------------------------------------------------------ learning

Outcome LearningSanity() {
  namespace est = fa::estimator;
  const auto start = Clock::now();
  Checker c;
  fa::Rng rng(2026);
  std::vector<std::string> fillers;
  for (int k = 0; k < 60; ++k) fillers.push_back("filler" + std::string(1, static_cast<char>('a' + k % 26)) +
                                                 std::string(1, static_cast<char>('a' + k / 26)));
  std::vector<TokenSequence> texts;
  std::vector<int> labels;
  for (int i = 0; i < 2000; ++i) {
    const auto len = 4 + fa::UniformIndex(rng, 9);
    TokenSequence t;
    for (std::uint64_t k = 0; k < len; ++k) t.push_back(fillers[fa::UniformIndex(rng, fillers.size())]);
    const int label = static_cast<int>(fa::UniformIndex(rng, 2));
    if (label) t[fa::UniformIndex(rng, t.size())] = "marker";
    texts.push_back(std::move(t));
    labels.push_back(label);
  }
  std::vector<est::EncodedExample> ex;
  for (std::size_t i = 0; i < texts.size(); ++i) ex.push_back({{}, labels[i], std::to_string(i)});
  auto split = est::SplitDataset(std::move(ex), 11);
  std::vector<TokenSequence> train_texts;
  std::size_t max_len = 1;
  for (const auto& e : split.train) {
    train_texts.push_back(texts[std::stoul(e.text_id)]);
    max_len = std::max(max_len, train_texts.back().size());
  }
  const auto vocab = est::Vocabulary::Build(train_texts);
  for (auto* set : {&split.train, &split.validation, &split.test})
    for (auto& e : *set) e.ids = vocab.Encode(texts[std::stoul(e.text_id)], static_cast<int>(max_len));

  est::TrainConfig cfg;
  fa::Rng init(cfg.seed);
  auto model = est::Model::Initialized(vocab.size(), cfg.embedding_dim, cfg.hidden_dim, init);
  const auto history = est::Train(model, split.train, split.validation, cfg);
  const auto ev = est::Evaluate(model, split.test);
  c.Expect(history.train_loss.size() == 20, "epoch count");
  c.Expect(ev.metrics.f1 >= 0.95, "F1 " + std::to_string(ev.metrics.f1));
  c.Expect(ev.metrics.accuracy >= 0.95, "accuracy " + std::to_string(ev.metrics.accuracy));
  const double secs = Seconds(start);
  c.Expect(secs < 300.0, "runtime over 5 min");
  char buf[160];
  std::snprintf(buf, sizeof buf, "split %zu/%zu/%zu, test F1 %.4f accuracy %.4f, final train loss %.4f",
                split.train.size(), split.validation.size(), split.test.size(), ev.metrics.f1, ev.metrics.accuracy,
                history.train_loss.back());
  return c.Done(buf);
}

// ------------------------------------------------------------------ audio

Outcome Audio() {
  using namespace fa::audio;
  Checker c;
  // 440 Hz at 44.1 kHz, one second.
  AudioClip sine;
  sine.sample_rate = 44100;
  sine.bit_depth = 16;
  sine.samples.resize(44100, 1);
  for (Eigen::Index n = 0; n < 44100; ++n)
    sine.samples(n, 0) = Quantize(0.8 * std::sin(2.0 * std::numbers::pi * 440.0 * static_cast<double>(n) / 44100.0), 16);
  const AudioClip std1 = Standardize(sine);
  c.Expect(std1.sample_rate == 16000 && std1.bit_depth == 8 && std1.channels() == 1, "standard format");
  c.Expect(Standardize(std1) == std1, "standardize not idempotent");

  // Peak of the magnitude spectrum by direct DFT over 0..1000 Hz in 1 Hz
  // bins (one second of audio, so bin k is k Hz).
  const Eigen::Index N = std1.frames();
  double best_mag = -1.0;
  int best_hz = 0;
  for (int hz = 1; hz <= 1000; ++hz) {
    std::complex<double> acc = 0;
    for (Eigen::Index n = 0; n < N; ++n)
      acc += std1.samples(n, 0) * std::polar(1.0, -2.0 * std::numbers::pi * hz * static_cast<double>(n) /
                                                       static_cast<double>(N));
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best_hz = hz;
    }
  }
  c.Expect(std::abs(best_hz - 440) <= 0.02 * 440, "DFT peak at " + std::to_string(best_hz) + " Hz");

  // Other shapes: stereo at 22.05 kHz, 24-bit, already-standard input.
  AudioClip stereo;
  stereo.sample_rate = 22050;
  stereo.bit_depth = 24;
  stereo.samples.resize(5000, 2);
  fa::Rng rng(5);
  for (Eigen::Index k = 0; k < stereo.samples.size(); ++k)
    stereo.samples.data()[k] = Quantize(2.0 * fa::UniformUnit(rng) - 1.0, 24);
  const AudioClip s2 = Standardize(stereo);
  c.Expect(Standardize(s2) == s2, "stereo standardize not idempotent");

  // Byte-identical round trip on canonical files written by Python's wave module.
  int files = 0;
  for (const char* name : {"pcm8_mono_16k.wav", "pcm16_stereo_22k.wav", "pcm24_mono_44k.wav", "pcm32_stereo_8k.wav"}) {
    const fs::path path = fs::path(FA_TEST_DATA_DIR) / name;
    std::ifstream in(path, std::ios::binary);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const AudioClip clip = ReadWav(bytes);
    c.Expect(WriteWav(clip) == bytes, std::string(name) + " not byte-identical");
    c.Expect(ReadWav(WriteWav(clip)) == clip, std::string(name) + " decode mismatch");
    ++files;
  }
  return c.Done("idempotent; 440 Hz -> peak " + std::to_string(best_hz) + " Hz; " + std::to_string(files) +
                " canonical files byte-identical");
}

// ------------------------------------------------------------------ ln 2

Outcome Ln2() {
  namespace est = fa::estimator;
  Checker c;
  est::Model model(10, 4, 5);  // all parameters zero: output exactly 0.5
  est::TokenBatch tokens(6, 8);
  est::VectorX<double> labels(8);
  for (int b = 0; b < 8; ++b) {
    for (int t = 0; t < 6; ++t) tokens(t, b) = (b + t) % 12;
    labels(b) = b % 2;
  }
  const double loss = model.Loss(tokens, labels);
  const double err = std::abs(loss - std::numbers::ln2);
  c.Expect(err <= 1e-12, "loss " + std::to_string(loss));
  c.Expect(model.PredictBatch(tokens).isConstant(0.5), "zero model is not 0.5");
  char buf[80];
  std::snprintf(buf, sizeof buf, "|BCE - ln 2| = %.1e", err);
  return c.Done(buf);
}

}  // namespace

int main() {
  Report("wer-oracle-equivalence", WerOracle);
  Report("wer-goldens", WerGoldens);
  Report("normalization-goldens-idempotence", Normalization);
  Report("crossasr-truth-table", CrossAsrTable);
  Report("false-alarm-truth-table", FalseAlarmTable);
  Report("scripted-end-to-end-resume", ScriptedEndToEnd);
  Report("tokenizer-encoding-split", TokenizerGoldens);
  Report("labeling-threshold", Labeling);
  Report("gradient-check", GradientCheck);
  Report("estimator-learning-sanity", LearningSanity);
  Report("audio-standardize-dft-roundtrip", Audio);
  Report("ln2-loss", Ln2);
  std::printf("%s: %d criteria failed\n", g_failed == 0 ? "ALL PASS" : "FAILURES", g_failed);
  return g_failed == 0 ? 0 : 1;
}
