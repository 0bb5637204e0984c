// Copyright 2026 The sumrank Authors.
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

#include "sumrank/text_similarity.hpp"

#include <cmath>
#include <vector>

namespace sumrank {

namespace {

// Collects the union vocabulary and the aligned counts of both texts.
void align_counts(const CountMap& p, const CountMap& q,
                  std::vector<double>& pc, std::vector<double>& qc) {
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      pc.push_back(ip->second);
      qc.push_back(0.0);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      pc.push_back(0.0);
      qc.push_back(iq->second);
      ++iq;
    } else {
      pc.push_back(ip->second);
      qc.push_back(iq->second);
      ++ip;
      ++iq;
    }
  }
}

// Lidstone-smoothed probabilities over the union vocabulary, in place.
void smooth(std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  const double denom = total + kLidstoneAlpha * static_cast<double>(counts.size());
  for (double& c : counts) c = (c + kLidstoneAlpha) / denom;
}

}  // namespace

double cosine_similarity(const std::map<std::string, double>& a,
                         const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [word, weight] : a) na += weight * weight;
  for (const auto& [word, weight] : b) nb += weight * weight;
  if (na == 0.0 || nb == 0.0) return 0.0;
  auto it = b.begin();
  for (const auto& [word, weight] : a) {
    while (it != b.end() && it->first < word) ++it;
    if (it == b.end()) break;
    if (it->first == word) dot += weight * it->second;
  }
  return dot / std::sqrt(na * nb);
}

double cosine_similarity(const CountMap& a, const CountMap& b) {
  std::map<std::string, double> da(a.begin(), a.end());
  std::map<std::string, double> db(b.begin(), b.end());
  return cosine_similarity(da, db);
}

double jaccard_similarity(const std::set<std::string>& a,
                          const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t intersection = 0;
  auto it = b.begin();
  for (const std::string& word : a) {
    while (it != b.end() && *it < word) ++it;
    if (it == b.end()) break;
    if (*it == word) ++intersection;
  }
  const std::size_t unions = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

double js_divergence(const CountMap& p, const CountMap& q) {
  std::vector<double> pc, qc;
  align_counts(p, q, pc, qc);
  if (pc.empty()) return 0.0;
  smooth(pc);
  smooth(qc);
  double js = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double m = 0.5 * (pc[i] + qc[i]);
    js += 0.5 * pc[i] * std::log(pc[i] / m) + 0.5 * qc[i] * std::log(qc[i] / m);
  }
  return js;
}

double kl_divergence(const CountMap& p, const CountMap& q) {
  std::vector<double> pc, qc;
  align_counts(p, q, pc, qc);
  if (pc.empty()) return 0.0;
  smooth(pc);
  smooth(qc);
  double kl = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    kl += pc[i] * std::log(pc[i] / qc[i]);
  }
  return kl;
}

}  // namespace sumrank
