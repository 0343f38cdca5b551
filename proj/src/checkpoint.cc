// Copyright 2026 The Duel Authors.
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

// Model checkpoint (de)serialization. Objects are emitted with sorted keys,
// so identical models produce identical bytes.

#include <fstream>
#include <sstream>

#include "duel/models.h"
#include "json.hpp"

namespace duel {

using nlohmann::json;

namespace {

json NGramToJson(const NGramModel &m) {
  json counts = json::object();
  for (const auto &[context, ctx] : m.contexts()) {
    json row = json::object();
    for (const auto &[unit, c] : ctx.counts) row[unit] = c;
    counts[context] = std::move(row);
  }
  return json{{"order", m.order()},
              {"unit", UnitName(m.unit())},
              {"discount", m.discount()},
              {"vocab_size", m.vocab_size()},
              {"counts", std::move(counts)}};
}

NGramModel NGramFromJson(const json &j) {
  const Unit unit = j.at("unit").get<std::string>() == "lemma" ? Unit::kLemma
                                                               : Unit::kWord;
  NGramModel m(j.at("order").get<int>(), unit, j.at("discount").get<double>());
  m.set_vocab_size(j.at("vocab_size").get<std::size_t>());
  for (const auto &[context, row] : j.at("counts").items()) {
    for (const auto &[u, c] : row.items()) m.AddCount(context, u, c.get<double>());
  }
  return m;
}

struct ChainSlot {
  Feature feature;
  std::optional<NGramModel> ClassModel::*member;
};

constexpr ChainSlot kChains[] = {
    {Feature::kP1L, &ClassModel::p1l},
    {Feature::kP2L, &ClassModel::p2l},
    {Feature::kP1M, &ClassModel::p1m},
    {Feature::kP2M, &ClassModel::p2m},
};

json ClassToJson(const ClassModel &c) {
  json gaussians = json::object();
  for (Feature f : kAllFeatures) {
    if (const auto &g = c.gaussians[FeatureIndex(f)]) {
      gaussians[FeatureName(f)] = {{"mean", g->mean}, {"variance", g->variance}};
    }
  }
  json ngrams = json::object();
  for (const ChainSlot &slot : kChains) {
    if (const auto &m = c.*slot.member) {
      ngrams[FeatureName(slot.feature)] = NGramToJson(*m);
    }
  }
  return json{{"gaussians", std::move(gaussians)}, {"ngrams", std::move(ngrams)}};
}

ClassModel ClassFromJson(const json &j, Label label) {
  ClassModel c;
  c.label = label;
  for (const auto &[name, g] : j.at("gaussians").items()) {
    c.gaussians[FeatureIndex(ParseFeature(name))] =
        GaussianModel{g.at("mean").get<double>(), g.at("variance").get<double>()};
  }
  const json &ngrams = j.at("ngrams");
  for (const ChainSlot &slot : kChains) {
    const char *name = FeatureName(slot.feature);
    if (ngrams.contains(name)) c.*slot.member = NGramFromJson(ngrams.at(name));
  }
  return c;
}

}  // namespace

std::string SerializeModels(const ModelSet &models) {
  json raw = json::object(), normalized = json::object();
  for (Feature f : kAllFeatures) {
    raw[FeatureName(f)] = models.weights.raw[FeatureIndex(f)];
    normalized[FeatureName(f)] = models.weights.value[FeatureIndex(f)];
  }
  json j{{"format_version", kCheckpointVersion},
         {"view", {{"variant", VariantName(models.variant)}}},
         {"weights", {{"raw", std::move(raw)}, {"normalized", std::move(normalized)}}},
         {"classes",
          {{"C", ClassToJson(models.classes.c)}, {"M", ClassToJson(models.classes.m)}}}};
  return j.dump() + "\n";
}

ModelSet DeserializeModels(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 1);
  }
  try {
    if (j.at("format_version").get<int>() != kCheckpointVersion) {
      throw InvalidArgument("unsupported checkpoint format version");
    }
    ModelSet set;
    set.variant = ParseVariant(j.at("view").at("variant").get<std::string>());
    std::array<double, kNumFeatures> raw{};
    for (const auto &[name, v] : j.at("weights").at("raw").items()) {
      raw[FeatureIndex(ParseFeature(name))] = v.get<double>();
    }
    set.weights = NormalizeWeights(raw, ActiveFeatures(set.variant));
    set.classes.c = ClassFromJson(j.at("classes").at("C"), Label::kC);
    set.classes.m = ClassFromJson(j.at("classes").at("M"), Label::kM);
    return set;
  } catch (const json::exception &e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 1);
  }
}

void SaveModels(const std::string &path, const ModelSet &models) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path);
  out << SerializeModels(models);
}

ModelSet LoadModels(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return DeserializeModels(buf.str());
}

}  // namespace duel
