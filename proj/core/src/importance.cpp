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

#include "sumrank/importance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "sumrank/random.hpp"
#include "sumrank/text_similarity.hpp"

namespace sumrank {

std::vector<double> word_features(const WordStats& w, const DocumentSet& ds) {
  std::vector<double> f(kWordFeatureDim, 0.0);
  f[0] = w.tf;
  f[1] = w.df;

  int occurrences = 0, noun = 0, verb = 0, adjective = 0, adverb = 0, entity = 0;
  double weight_max = 0.0, weight_min = 1.0, weight_sum = 0.0, length_sum = 0.0;
  for (int sid : w.containing_sentences) {
    const Sentence& s = ds.sentences[sid];
    for (const Token& t : s.tokens) {
      if (t.lower != w.word) continue;
      ++occurrences;
      switch (t.pos) {
        case PosTag::kNoun: ++noun; break;
        case PosTag::kVerb: ++verb; break;
        case PosTag::kAdjective: ++adjective; break;
        case PosTag::kAdverb: ++adverb; break;
        default: break;
      }
      if (t.is_named_entity) ++entity;
    }
    const double weight = ds.position_weight(sid);
    weight_max = std::max(weight_max, weight);
    weight_min = std::min(weight_min, weight);
    weight_sum += weight;
    length_sum += s.word_length;
  }
  f[2] = 2 * noun > occurrences ? 1.0 : 0.0;
  f[3] = 2 * verb > occurrences ? 1.0 : 0.0;
  f[4] = 2 * adjective > occurrences ? 1.0 : 0.0;
  f[5] = 2 * adverb > occurrences ? 1.0 : 0.0;
  f[6] = 2 * entity > occurrences ? 1.0 : 0.0;
  f[7] = is_number_token(w.word) ? 1.0 : 0.0;

  const double n_containing = static_cast<double>(w.containing_sentences.size());
  if (n_containing > 0) {
    f[8] = weight_max;
    f[9] = weight_min;
    f[10] = weight_sum / n_containing;
    f[12] = length_sum / n_containing;
  }
  f[11] = n_containing / static_cast<double>(ds.sentences.size());
  f[13] = ds.lead_types.count(w.word) > 0 ? 1.0 : 0.0;
  f[14] = static_cast<double>(w.word.size());
  return f;
}

std::vector<double> sentence_features(const Sentence& s, const DocumentSet& ds) {
  std::vector<double> f(kSentenceFeatureDim, 0.0);
  f[0] = ds.position_weight(s.sentence_id);
  f[1] = s.word_length;
  f[2] = s.subsentence_count;
  f[3] = s.parse_depth;

  int stop = 0, noun = 0, verb = 0, adjective = 0, adverb = 0, entity = 0, number = 0;
  int content = 0;
  double tf_sum = 0.0, df_sum = 0.0;
  for (const Token& t : s.tokens) {
    if (t.is_stopword) {
      ++stop;
    } else {
      ++content;
      auto it = ds.vocabulary.find(t.lower);
      if (it != ds.vocabulary.end()) {
        tf_sum += it->second.tf;
        df_sum += it->second.df;
      }
    }
    switch (t.pos) {
      case PosTag::kNoun: ++noun; break;
      case PosTag::kVerb: ++verb; break;
      case PosTag::kAdjective: ++adjective; break;
      case PosTag::kAdverb: ++adverb; break;
      default: break;
    }
    if (t.is_named_entity) ++entity;
    if (t.is_number) ++number;
  }
  const double total = static_cast<double>(s.word_length);
  f[4] = stop / total;
  if (content > 0) {
    f[5] = tf_sum / content;
    f[6] = df_sum / content;
  }
  f[7] = noun / total;
  f[8] = verb / total;
  f[9] = adjective / total;
  f[10] = adverb / total;
  f[11] = entity / total;
  f[12] = number / total;
  return f;
}

double word_target(const WordStats& w, const ReferenceSet& refs) {
  int count = 0;
  for (const auto& reference : refs.references) {
    for (const auto& sentence : reference) {
      for (const std::string& token : sentence) {
        if (token == w.word) ++count;
      }
    }
  }
  return static_cast<double>(count);
}

double sentence_target(const Sentence& s, const ReferenceSet& refs) {
  CountMap sentence_counts;
  for (const Token& t : s.tokens) {
    if (!t.is_stopword) ++sentence_counts[t.lower];
  }
  double best = 0.0;
  for (const auto& reference : refs.references) {
    for (const auto& ref_sentence : reference) {
      CountMap ref_counts;
      for (const std::string& token : ref_sentence) {
        if (!is_stopword_word(token)) ++ref_counts[token];
      }
      best = std::max(best, cosine_similarity(sentence_counts, ref_counts));
    }
  }
  return best;
}

namespace {

void fit_minmax(const std::vector<RegressionInstance>& data,
                std::vector<double>& lo, std::vector<double>& hi) {
  lo = data.front().features;
  hi = data.front().features;
  const std::size_t dim = lo.size();
  for (const RegressionInstance& inst : data) {
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], inst.features[d]);
      hi[d] = std::max(hi[d], inst.features[d]);
    }
  }
}

double scale_value(double x, double lo, double hi, bool clamp) {
  if (hi <= lo) return 0.0;  // constant feature
  double v = (x - lo) / (hi - lo);
  if (clamp) v = std::clamp(v, 0.0, 1.0);
  return v;
}

}  // namespace

LinearModel train_svr(const std::vector<RegressionInstance>& data,
                      const SvrOptions& options, const std::string& schema_id) {
  if (data.empty()) throw DataError("SVR training data is empty");
  const std::size_t dim = data.front().features.size();
  if (dim == 0) throw DataError("SVR training data has zero-dimensional features");
  for (const RegressionInstance& inst : data) {
    if (inst.features.size() != dim) {
      throw DataError("SVR training data has inconsistent feature dimensions");
    }
    if (!std::isfinite(inst.target)) {
      throw DataError("SVR training data contains a non-finite target");
    }
    for (double v : inst.features) {
      if (!std::isfinite(v)) {
        throw DataError("SVR training data contains a non-finite feature");
      }
    }
  }
  LinearModel model;
  model.schema_id = schema_id;
  fit_minmax(data, model.scaler_min, model.scaler_max);

  std::vector<std::vector<double>> x(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    x[i].resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      x[i][d] = scale_value(data[i].features[d], model.scaler_min[d],
                            model.scaler_max[d], /*clamp=*/false);
    }
  }

  const double n = static_cast<double>(data.size());
  const double reg = 1.0 / (options.c * n);  // coefficient of the 1/2||w||^2 term
                                             // after normalizing by c*n
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(options.seed);

  long long t = 1;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (std::size_t idx : order) {
      const std::vector<double>& xi = x[idx];
      double pred = b;
      for (std::size_t d = 0; d < dim; ++d) pred += w[d] * xi[d];
      const double residual = pred - data[idx].target;
      const double eta = 1.0 / (reg * static_cast<double>(t));
      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      for (double& wd : w) wd *= shrink;
      if (residual > options.epsilon) {
        for (std::size_t d = 0; d < dim; ++d) w[d] -= eta * xi[d];
        b -= eta;
      } else if (residual < -options.epsilon) {
        for (std::size_t d = 0; d < dim; ++d) w[d] += eta * xi[d];
        b += eta;
      }
      ++t;
    }
  }
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

double predict(const LinearModel& model, std::span<const double> features) {
  if (!model.trained()) throw DataError("model is untrained");
  if (features.size() != model.weights.size()) {
    throw DataError("feature dimension " + std::to_string(features.size()) +
                    " does not match model dimension " +
                    std::to_string(model.weights.size()));
  }
  double value = model.bias;
  for (std::size_t d = 0; d < features.size(); ++d) {
    value += model.weights[d] * scale_value(features[d], model.scaler_min[d],
                                            model.scaler_max[d], /*clamp=*/true);
  }
  return std::max(0.0, value);
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["schema_id"] = model.schema_id;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["scaler_min"] = model.scaler_min;
  j["scaler_max"] = model.scaler_max;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open model file for writing: " + path.string());
  out << j.dump(2) << '\n';
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("model file " + path.string() + ": " + e.what());
  }
  LinearModel model;
  try {
    model.schema_id = j.at("schema_id").get<std::string>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.scaler_min = j.at("scaler_min").get<std::vector<double>>();
    model.scaler_max = j.at("scaler_max").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model file " + path.string() + ": " + e.what());
  }
  if (model.weights.size() != model.scaler_min.size() ||
      model.weights.size() != model.scaler_max.size()) {
    throw DataError("model file " + path.string() + ": inconsistent dimensions");
  }
  return model;
}

}  // namespace sumrank
