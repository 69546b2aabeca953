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
#include <cctype>
#include <cmath>
#include <map>
#include <regex>

#include "stepfix/error.hpp"
#include "stepfix/metrics.hpp"

namespace stepfix {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<Ngram, std::size_t> out;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++out[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

bool exact_match(const LogicalForm& a, const LogicalForm& b, const EntityMap* entities) {
  return canonical_text(a, entities) == canonical_text(b, entities);
}

bool exact_match(const LogicalForm& a, const EntityMap& a_entities, const LogicalForm& b,
                 const EntityMap& b_entities) {
  return canonical_text(a, &a_entities) == canonical_text(b, &b_entities);
}

double ratio(const std::vector<bool>& flags) {
  if (flags.empty()) return 0;
  return static_cast<double>(std::count(flags.begin(), flags.end(), true)) / static_cast<double>(flags.size());
}

double answer_f1(const std::set<Value>& pred, const std::set<Value>& gold) {
  if (pred.empty() && gold.empty()) return 1;
  if (pred.empty() || gold.empty()) return 0;
  std::size_t hit = 0;
  for (const auto& v : pred) hit += gold.count(v);
  if (hit == 0) return 0;
  double p = static_cast<double>(hit) / static_cast<double>(pred.size());
  double r = static_cast<double>(hit) / static_cast<double>(gold.size());
  return 2 * p * r / (p + r);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::string spaced;
  for (char c : lower(text)) {
    if (std::string_view("?.,!;:()\"").find(c) != std::string_view::npos) {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::vector<std::string> out;
  std::string cur;
  for (char c : spaced) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double corpus_bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
                   int max_n) {
  if (candidates.size() != references.size())
    fail(ErrorKind::LengthMismatch, std::to_string(candidates.size()) + " candidates but " +
                                        std::to_string(references.size()) + " references");
  if (max_n < 1) fail(ErrorKind::InvalidArgument, "BLEU order must be positive");
  std::vector<double> matched(max_n, 0), total(max_n, 0);
  double c_len = 0, r_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto c = tokenize(candidates[i]);
    auto r = tokenize(references[i]);
    c_len += static_cast<double>(c.size());
    r_len += static_cast<double>(r.size());
    for (int n = 1; n <= max_n; ++n) {
      auto cc = ngram_counts(c, n);
      auto rc = ngram_counts(r, n);
      for (const auto& [g, k] : cc) {
        total[n - 1] += static_cast<double>(k);
        if (auto it = rc.find(g); it != rc.end()) matched[n - 1] += static_cast<double>(std::min(k, it->second));
      }
    }
  }
  if (c_len == 0) return 0;
  double log_sum = 0;
  for (int n = 0; n < max_n; ++n) {
    double p = total[n] > 0 ? matched[n] / total[n] : 0;
    log_sum += std::log(std::max(p, kBleuEpsilon));
  }
  double bp = c_len >= r_len ? 1.0 : std::exp(1.0 - r_len / c_len);
  return bp * std::exp(log_sum / max_n);
}

std::string mask_entities(std::string_view text, const std::vector<std::string>& surfaces) {
  static const std::regex placeholder(R"(#entity\d+#)");
  std::string out = std::regex_replace(std::string(text), placeholder, "#entity#");
  std::vector<std::string> sorted = surfaces;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& s : sorted) {
    if (s.empty()) continue;
    for (std::size_t pos = out.find(s); pos != std::string::npos; pos = out.find(s, pos + 8))
      out.replace(pos, s.size(), "#entity#");
  }
  return out;
}

double rouge_n(std::string_view candidate, std::string_view reference, int n, bool mask,
               const std::vector<std::string>& surfaces) {
  auto c = tokenize(mask ? mask_entities(candidate, surfaces) : std::string(candidate));
  auto r = tokenize(mask ? mask_entities(reference, surfaces) : std::string(reference));
  auto cc = ngram_counts(c, n);
  auto rc = ngram_counts(r, n);
  double overlap = 0, c_total = 0, r_total = 0;
  for (const auto& [g, k] : cc) {
    c_total += static_cast<double>(k);
    if (auto it = rc.find(g); it != rc.end()) overlap += static_cast<double>(std::min(k, it->second));
  }
  for (const auto& [g, k] : rc) r_total += static_cast<double>(k);
  if (overlap == 0) return 0;
  double p = overlap / c_total, rec = overlap / r_total;
  return 2 * p * rec / (p + rec);
}

DiversityReport diversity_report(const std::vector<std::string>& sentences) {
  if (sentences.empty()) fail(ErrorKind::InvalidArgument, "diversity needs at least one sentence");
  std::vector<std::vector<std::string>> docs;
  double words = 0;
  for (const auto& s : sentences) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : lower(s) + " ") {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) toks.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    words += static_cast<double>(toks.size());
    docs.push_back(std::move(toks));
  }
  DiversityReport report;
  report.avg_length_words = words / static_cast<double>(sentences.size());
  for (int n = 1; n <= 3; ++n) {
    std::map<Ngram, std::size_t> counts;
    for (const auto& d : docs)
      for (const auto& [g, k] : ngram_counts(d, n)) counts[g] += k;
    NgramStats st;
    st.n = n;
    for (const auto& [g, k] : counts) {
      st.total += k;
      if (k == 1) ++st.unique_count;
    }
    st.vocab_size = counts.size();
    st.distinct_ratio = st.total ? static_cast<double>(st.vocab_size) / static_cast<double>(st.total) : 0;
    const double total = static_cast<double>(st.total);
    std::map<Ngram, std::size_t> prefixes;
    for (const auto& [g, k] : counts) {
      double p = static_cast<double>(k) / total;
      st.entropy_bits -= p * std::log2(p);
      if (n >= 2) prefixes[Ngram(g.begin(), g.end() - 1)] += k;
    }
    if (n >= 2) {
      double h = 0;
      for (const auto& [g, k] : counts) {
        double p = static_cast<double>(k) / total;
        double pp = static_cast<double>(prefixes[Ngram(g.begin(), g.end() - 1)]) / total;
        h -= p * std::log2(p / pp);
      }
      st.conditional_entropy_bits = h;
    }
    if (st.entropy_bits < 0) st.entropy_bits = 0;  // -0.0 from a single n-gram
    report.per_n.push_back(st);
  }
  return report;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace stepfix
