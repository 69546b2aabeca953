/*
 * Copyright 2026 The stepfix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "stepfix/error.hpp"
#include "stepfix/metrics.hpp"

namespace stepfix {

UnigramScorer::UnigramScorer(const std::vector<std::string>& corpus) {
  for (const auto& line : corpus)
    for (auto& tok : tokenize(line)) {
      ++counts_[tok];
      ++total_;
    }
}

std::vector<double> UnigramScorer::token_logprobs(const std::vector<std::string>& target, std::string_view) const {
  std::vector<double> out;
  out.reserve(target.size());
  const double denom = static_cast<double>(total_ + counts_.size() + 1);
  for (const auto& tok : target) {
    auto it = counts_.find(tok);
    double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
    out.push_back(std::log((c + 1.0) / denom));
  }
  return out;
}

double sequence_score(const Scorer& scorer, const std::string& text, std::string_view source,
                      const std::string& id) {
  auto tokens = tokenize(text);
  std::vector<double> lp;
  try {
    lp = scorer.token_logprobs(tokens, source);
  } catch (const std::exception& e) {
    fail(ErrorKind::ScorerFailure, "scorer failed on item '" + id + "': " + e.what());
  }
  if (lp.size() != tokens.size())
    fail(ErrorKind::ScorerFailure, "scorer returned " + std::to_string(lp.size()) + " values for " +
                                       std::to_string(tokens.size()) + " tokens on item '" + id + "'");
  double s = 0;
  for (double v : lp) {
    if (!std::isfinite(v) || v > 0)
      fail(ErrorKind::ScorerFailure, "scorer returned an invalid log-probability on item '" + id + "'");
    s -= v;
  }
  return s;
}

std::vector<std::string> interleave(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    if (i < a.size() && seen.insert(a[i]).second) out.push_back(a[i]);
    if (i < b.size() && seen.insert(b[i]).second) out.push_back(b[i]);
  }
  return out;
}

std::vector<RankedItem> cleaning_rank(const std::vector<CleaningItem>& items, const Scorer& scorer) {
  std::vector<RankedItem> scored;
  std::map<std::string, std::size_t> by_id;
  for (const auto& item : items) {
    if (item.generated.empty()) fail(ErrorKind::ScorerFailure, "item '" + item.id + "' has no generated output");
    double target = sequence_score(scorer, item.target, item.source, item.id);
    std::size_t best = 0;
    double best_score = 0;
    for (std::size_t g = 0; g < item.generated.size(); ++g) {
      double s = sequence_score(scorer, item.generated[g], item.source, item.id);
      if (g == 0 || s < best_score) best = g, best_score = s;
    }
    if (!by_id.emplace(item.id, scored.size()).second)
      fail(ErrorKind::InvalidArgument, "duplicate item id '" + item.id + "'");
    scored.push_back(RankedItem{item.id, std::abs(best_score - target),
                                levenshtein(item.target, item.generated[best]), item.inaccurate});
  }
  std::vector<std::size_t> by_d(scored.size());
  std::iota(by_d.begin(), by_d.end(), 0);
  auto by_ed = by_d;
  std::stable_sort(by_d.begin(), by_d.end(), [&](auto x, auto y) { return scored[x].d_score > scored[y].d_score; });
  std::stable_sort(by_ed.begin(), by_ed.end(),
                   [&](auto x, auto y) { return scored[x].edit_distance > scored[y].edit_distance; });
  std::vector<std::string> a, b;
  for (auto i : by_d) a.push_back(scored[i].id);
  for (auto i : by_ed) b.push_back(scored[i].id);
  std::vector<RankedItem> out;
  for (const auto& id : interleave(a, b)) out.push_back(scored[by_id.at(id)]);
  return out;
}

double precision_at_k(const std::vector<RankedItem>& ranked, std::size_t k) {
  if (k == 0 || k > ranked.size())
    fail(ErrorKind::InvalidArgument, "k must be in 1.." + std::to_string(ranked.size()));
  std::size_t bad = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!ranked[i].inaccurate) fail(ErrorKind::UnlabeledItem, "item '" + ranked[i].id + "' has no label");
    bad += *ranked[i].inaccurate ? 1 : 0;
  }
  return static_cast<double>(bad) / static_cast<double>(k);
}

ContextAwareness context_awareness(const std::vector<ContextPair>& pairs, int n, bool mask, std::uint64_t seed) {
  if (pairs.size() < 2) fail(ErrorKind::InvalidArgument, "context comparison needs at least two items");
  std::vector<std::size_t> perm(pairs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  ContextAwareness out;
  out.items = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::size_t other = perm[i] == i ? (i + 1) % pairs.size() : perm[i];
    const auto& p = pairs[i];
    auto surfaces = p.surfaces;
    surfaces.insert(surfaces.end(), pairs[other].surfaces.begin(), pairs[other].surfaces.end());
    out.actual_mean += rouge_n(p.text, p.context, n, mask, p.surfaces);
    out.random_mean += rouge_n(p.text, pairs[other].context, n, mask, surfaces);
  }
  out.actual_mean /= static_cast<double>(pairs.size());
  out.random_mean /= static_cast<double>(pairs.size());
  return out;
}

std::string format_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      std::string cell = c < cells.size() ? cells[c] : "";
      os << (c ? "  " : "") << cell;
      if (c + 1 < width.size()) os << std::string(width[c] - cell.size(), ' ');
    }
    os << '\n';
  };
  line(header);
  std::size_t rule = 0;
  for (auto w : width) rule += w;
  os << std::string(rule + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
  return os.str();
}

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string diversity_table(const DiversityReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : report.per_n)
    rows.push_back({std::to_string(s.n), std::to_string(s.vocab_size), fixed(s.distinct_ratio),
                    std::to_string(s.unique_count), fixed(s.entropy_bits),
                    s.conditional_entropy_bits ? fixed(*s.conditional_entropy_bits) : "-"});
  return format_table({"n", "vocab", "distinct", "unique", "entropy", "cond_entropy"}, rows) +
         "avg_length_words " + fixed(report.avg_length_words, 2) + "\n";
}

std::string diversity_json(const DiversityReport& report) {
  nlohmann::json j;
  j["avg_length_words"] = report.avg_length_words;
  j["per_n"] = nlohmann::json::array();
  for (const auto& s : report.per_n) {
    nlohmann::json e{{"n", s.n},
                     {"total", s.total},
                     {"vocab_size", s.vocab_size},
                     {"distinct_ratio", s.distinct_ratio},
                     {"unique_count", s.unique_count},
                     {"entropy_bits", s.entropy_bits}};
    if (s.conditional_entropy_bits) e["conditional_entropy_bits"] = *s.conditional_entropy_bits;
    j["per_n"].push_back(e);
  }
  return j.dump(2);
}

}  // namespace stepfix
