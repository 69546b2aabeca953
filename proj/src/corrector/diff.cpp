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

#include "stepfix/corrector.hpp"

namespace stepfix {

EditScript diff_components(const Decomposition& pred, const EntityMap& pred_entities,
                           const Decomposition& gold, const EntityMap& gold_entities,
                           const TemplateCorpus& corpus) {
  const std::size_t n = pred.components.size();
  const std::size_t m = gold.components.size();
  std::vector<std::string> pk, gk;
  for (const auto& c : pred.components) pk.push_back(component_key(c, &pred_entities));
  for (const auto& c : gold.components) gk.push_back(component_key(c, &gold_entities));

  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = std::min({dp[i - 1][j - 1] + (pk[i - 1] == gk[j - 1] ? 0 : 1), dp[i - 1][j] + 1,
                           dp[i][j - 1] + 1});

  std::vector<std::size_t> deleted;
  std::vector<std::pair<std::size_t, std::size_t>> replaced;
  std::vector<std::size_t> inserted;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && pk[i - 1] == gk[j - 1] && dp[i][j] == dp[i - 1][j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1) {
      replaced.emplace_back(i - 1, j - 1);
      --i, --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      deleted.push_back(i - 1);
      --i;
    } else {
      inserted.push_back(j - 1);
      --j;
    }
  }
  std::reverse(replaced.begin(), replaced.end());
  std::reverse(inserted.begin(), inserted.end());

  EditScript script;
  auto same_sort = [&] {
    if (!pred.sort || !gold.sort) return !pred.sort && !gold.sort;
    return pred.sort->direction == gold.sort->direction && pred.sort->limit == gold.sort->limit;
  }();
  if (pred.sort && !same_sort && !gold.sort) script.ops.push_back(EditOp::remove(n + 1));
  for (auto d : deleted) script.ops.push_back(EditOp::remove(d + 1));  // already high to low
  for (auto [p, g] : replaced) {
    auto shift = std::count_if(deleted.begin(), deleted.end(), [&](std::size_t d) { return d < p; });
    script.ops.push_back(
        EditOp::replace(p + 1 - static_cast<std::size_t>(shift), render_step(gold, g, gold_entities, corpus).text));
  }
  for (auto g : inserted) script.ops.push_back(EditOp::insert(render_step(gold, g, gold_entities, corpus).text));
  if (gold.sort && !same_sort) {
    auto sentence = sort_sentence(*gold.sort, sort_predicate(gold));
    if (pred.sort) {
      script.ops.push_back(EditOp::replace(m + 1, sentence));
    } else {
      script.ops.push_back(EditOp::insert(sentence));
    }
  }
  return script;
}

}  // namespace stepfix
