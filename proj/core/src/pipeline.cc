// Copyright 2026 The weaktag Authors.
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

#include "weaktag/pipeline.h"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/eval.h"
#include "weaktag/io_util.h"
#include "weaktag/pos_pattern.h"
#include "weaktag/sampler.h"

namespace weaktag {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string ExperimentConfig::resolve(const std::string& path) const {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string ExperimentConfig::hash() const {
  return hex64(fnv1a64(canonical_json));
}

namespace {

class Errors {
 public:
  void add(std::string message) { list_.push_back(std::move(message)); }
  bool empty() const { return list_.empty(); }
  const std::vector<std::string>& list() const { return list_; }

 private:
  std::vector<std::string> list_;
};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where, Errors& errors) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) errors.add(where + ": unknown key '" + key + "'");
  }
}

// Reads obj[key] into out when present, recording type errors.
template <typename T>
void get(const json& obj, const char* key, T& out, const std::string& where,
         Errors& errors) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    errors.add(where + ": '" + key + "' has the wrong type");
  }
}

CustomRule::Type parse_rule_type(const std::string& name, Errors& errors,
                                 const std::string& where) {
  if (name == "head_token_in_set") return CustomRule::Type::kHeadTokenInSet;
  if (name == "surface_regex") return CustomRule::Type::kSurfaceRegex;
  if (name == "context_window") return CustomRule::Type::kContextWindow;
  errors.add(where + ": unknown rule '" + name + "'");
  return CustomRule::Type::kHeadTokenInSet;
}

CustomRule::Side parse_side(const std::string& name, Errors& errors,
                            const std::string& where) {
  if (name == "left") return CustomRule::Side::kLeft;
  if (name == "right") return CustomRule::Side::kRight;
  if (name == "both") return CustomRule::Side::kBoth;
  errors.add(where + ": unknown side '" + name + "'");
  return CustomRule::Side::kLeft;
}

const std::set<std::string> kLfKinds = {
    "lexicon",  "tailword", "abbrv",  "idf_filter", "df_filter",
    "phrase_fragment", "cascade", "compose", "custom"};

}  // namespace

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  Errors errors;
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.canonical_json = root.dump();
  check_keys(root,
             {"name", "output_dir", "corpus", "lexicons", "stats", "candidates",
              "lfs", "fit", "sampler", "tagger", "eval", "jobs"},
             "config", errors);
  get(root, "name", c.name, "config", errors);
  get(root, "output_dir", c.output_dir, "config", errors);
  get(root, "jobs", c.jobs, "config", errors);
  if (c.jobs < 1) errors.add("config: jobs must be >= 1");

  if (!root.contains("corpus") || !root["corpus"].is_object()) {
    errors.add("config: missing 'corpus' block");
  } else {
    const json& corpus = root["corpus"];
    check_keys(corpus, {"path", "format", "synthetic"}, "corpus", errors);
    get(corpus, "path", c.corpus_path, "corpus", errors);
    get(corpus, "format", c.corpus_format, "corpus", errors);
    get(corpus, "synthetic", c.synthetic_spec, "corpus", errors);
    if (c.corpus_path.empty() == c.synthetic_spec.empty()) {
      errors.add("corpus: give exactly one of 'path' and 'synthetic'");
    }
    if (c.corpus_format != "jsonl" && c.corpus_format != "conll") {
      errors.add("corpus: format must be 'jsonl' or 'conll'");
    }
  }

  if (root.contains("lexicons")) {
    if (!root["lexicons"].is_array()) {
      errors.add("lexicons: must be an array");
    } else {
      int i = 0;
      for (const json& block : root["lexicons"]) {
        std::string where = "lexicons[" + std::to_string(i++) + "]";
        LexiconBlock lex;
        check_keys(block, {"name", "path", "polarity", "case_sensitive", "synthetic"},
                   where, errors);
        get(block, "name", lex.name, where, errors);
        get(block, "path", lex.path, where, errors);
        get(block, "polarity", lex.polarity, where, errors);
        get(block, "case_sensitive", lex.case_sensitive, where, errors);
        get(block, "synthetic", lex.synthetic, where, errors);
        if (lex.name.empty()) errors.add(where + ": missing name");
        if (lex.polarity != 1 && lex.polarity != -1) {
          errors.add(where + ": polarity must be 1 or -1");
        }
        if (lex.path.empty() == !lex.synthetic) {
          errors.add(where + ": give a path or \"synthetic\": true");
        }
        for (const LexiconBlock& other : c.lexicons) {
          if (other.name == lex.name) errors.add(where + ": duplicate name " + lex.name);
        }
        c.lexicons.push_back(std::move(lex));
      }
    }
  }

  if (root.contains("stats")) {
    const json& stats = root["stats"];
    check_keys(stats, {"enabled", "max_ngram"}, "stats", errors);
    get(stats, "enabled", c.stats_enabled, "stats", errors);
    get(stats, "max_ngram", c.stats_max_ngram, "stats", errors);
    if (c.stats_max_ngram < 1) errors.add("stats: max_ngram must be >= 1");
  }

  if (root.contains("candidates")) {
    const json& cand = root["candidates"];
    check_keys(cand, {"kind", "k_max", "pattern", "mode"}, "candidates", errors);
    get(cand, "kind", c.candidates.kind, "candidates", errors);
    get(cand, "k_max", c.candidates.k_max, "candidates", errors);
    get(cand, "pattern", c.candidates.pattern, "candidates", errors);
    get(cand, "mode", c.candidates.mode, "candidates", errors);
  }
  if (c.candidates.kind != "kgram" && c.candidates.kind != "dictionary" &&
      c.candidates.kind != "noun_phrase") {
    errors.add("candidates: kind must be kgram, dictionary or noun_phrase");
  }
  if (c.candidates.k_max < 1 || c.candidates.k_max > 10) {
    errors.add("candidates: k_max must be in [1, 10]");
  }
  if (c.candidates.mode != "all_matches" && c.candidates.mode != "longest_match") {
    errors.add("candidates: mode must be all_matches or longest_match");
  }
  if (!c.candidates.pattern.empty()) {
    try {
      PosPattern::compile(c.candidates.pattern);
    } catch (const ConfigError& e) {
      errors.add(std::string("candidates: ") + e.what());
    }
  }

  if (root.contains("lfs")) {
    if (!root["lfs"].is_array()) {
      errors.add("lfs: must be an array");
    } else {
      int i = 0;
      for (const json& block : root["lfs"]) {
        std::string where = "lfs[" + std::to_string(i++) + "]";
        LfBlock lf;
        check_keys(block,
                   {"kind", "name", "lexicons", "threshold", "direction", "base",
                    "vote_on_children", "a", "b", "combiner", "rule", "label",
                    "tokens", "pattern", "window", "side", "emit"},
                   where, errors);
        get(block, "kind", lf.kind, where, errors);
        get(block, "name", lf.name, where, errors);
        get(block, "lexicons", lf.lexicons, where, errors);
        get(block, "threshold", lf.threshold, where, errors);
        get(block, "direction", lf.direction, where, errors);
        get(block, "base", lf.base, where, errors);
        get(block, "vote_on_children", lf.vote_on_children, where, errors);
        get(block, "a", lf.a, where, errors);
        get(block, "b", lf.b, where, errors);
        get(block, "combiner", lf.combiner, where, errors);
        get(block, "emit", lf.emit, where, errors);
        if (!kLfKinds.count(lf.kind)) {
          errors.add(where + ": unknown kind '" + lf.kind + "'");
        }
        if (lf.kind == "custom") {
          std::string rule = "surface_regex", side = "left";
          get(block, "rule", rule, where, errors);
          get(block, "side", side, where, errors);
          lf.rule.type = parse_rule_type(rule, errors, where);
          lf.rule.side = parse_side(side, errors, where);
          get(block, "label", lf.rule.label, where, errors);
          get(block, "pattern", lf.rule.pattern, where, errors);
          get(block, "window", lf.rule.window, where, errors);
          if (block.contains("tokens")) {
            get(block, "tokens", lf.rule.tokens, where, errors);
          } else if (lf.rule.type != CustomRule::Type::kSurfaceRegex) {
            lf.rule.tokens = default_temporal_modifiers();
          }
          if (lf.name.empty()) errors.add(where + ": custom rules need a name");
          try {
            gen_custom_rule(lf.rule, lf.name.empty() ? "custom" : lf.name);
          } catch (const ConfigError& e) {
            errors.add(where + ": " + e.what());
          }
        }
        if (lf.kind == "df_filter" && lf.direction != "reject_above" &&
            lf.direction != "reject_at_or_below") {
          errors.add(where + ": direction must be reject_above or reject_at_or_below");
        }
        if (lf.kind == "compose" && lf.combiner != "and_agree" &&
            lf.combiner != "a_unless_b") {
          errors.add(where + ": combiner must be and_agree or a_unless_b");
        }
        if (lf.kind == "cascade" && lf.vote_on_children != -1 &&
            lf.vote_on_children != 1) {
          errors.add(where + ": vote_on_children must be -1 or 1");
        }
        c.lfs.push_back(std::move(lf));
      }
    }
  }

  if (root.contains("fit")) {
    const json& fit = root["fit"];
    check_keys(fit,
               {"mode", "tol", "max_iters", "seed", "k_max_cap", "prior",
                "smoothing", "init_accuracy", "clamp"},
               "fit", errors);
    get(fit, "mode", c.fit_mode, "fit", errors);
    get(fit, "tol", c.fit.tol, "fit", errors);
    get(fit, "max_iters", c.fit.max_iters, "fit", errors);
    get(fit, "seed", c.fit.seed, "fit", errors);
    get(fit, "k_max_cap", c.k_max_cap, "fit", errors);
    get(fit, "init_accuracy", c.fit.init_accuracy, "fit", errors);
    std::string prior = "uniform";
    get(fit, "prior", prior, "fit", errors);
    try {
      c.fit.prior = parse_class_prior(prior);
    } catch (const ConfigError& e) {
      errors.add(std::string("fit: ") + e.what());
    }
    if (fit.contains("smoothing")) {
      get(fit["smoothing"], "a", c.fit.smoothing_a, "fit.smoothing", errors);
      get(fit["smoothing"], "b", c.fit.smoothing_b, "fit.smoothing", errors);
    }
    if (fit.contains("clamp")) {
      std::vector<double> clamp;
      get(fit, "clamp", clamp, "fit", errors);
      if (clamp.size() == 2) {
        c.fit.clamp_low = clamp[0];
        c.fit.clamp_high = clamp[1];
      } else {
        errors.add("fit: clamp must be [low, high]");
      }
    }
  }
  if (c.fit_mode != "multinomial" && c.fit_mode != "binary") {
    errors.add("fit: mode must be multinomial or binary");
  }
  if (!(c.fit.tol > 0.0)) errors.add("fit: tol must be > 0");
  if (c.fit.max_iters < 1) errors.add("fit: max_iters must be >= 1");
  if (c.k_max_cap < 2) errors.add("fit: k_max_cap must be >= 2");
  if (c.fit.smoothing_a < 0.0 || c.fit.smoothing_b < 0.0) {
    errors.add("fit: smoothing must be non-negative");
  }
  if (!(c.fit.clamp_low > 0.0 && c.fit.clamp_low < c.fit.clamp_high &&
        c.fit.clamp_high < 1.0)) {
    errors.add("fit: clamp must satisfy 0 < low < high < 1");
  }

  if (root.contains("sampler")) {
    const json& s = root["sampler"];
    check_keys(s, {"num_samples", "seed"}, "sampler", errors);
    get(s, "num_samples", c.num_samples, "sampler", errors);
    get(s, "seed", c.sample_seed, "sampler", errors);
  }
  if (c.num_samples < 1) errors.add("sampler: num_samples must be >= 1");

  if (root.contains("tagger")) {
    const json& t = root["tagger"];
    check_keys(t, {"mode", "epochs", "seed", "l2", "hash_bits"}, "tagger", errors);
    std::string mode = "sampled_hard";
    get(t, "mode", mode, "tagger", errors);
    try {
      c.tagger.mode = parse_tagger_mode(mode);
    } catch (const ConfigError& e) {
      errors.add(std::string("tagger: ") + e.what());
    }
    get(t, "epochs", c.tagger.max_iters, "tagger", errors);
    get(t, "seed", c.tagger.seed, "tagger", errors);
    get(t, "l2", c.tagger.l2, "tagger", errors);
    get(t, "hash_bits", c.tagger.hash_bits, "tagger", errors);
  }
  if (c.tagger.max_iters < 1) errors.add("tagger: epochs must be >= 1");
  if (c.tagger.l2 < 0.0) errors.add("tagger: l2 must be non-negative");
  if (c.tagger.hash_bits < 8 || c.tagger.hash_bits > 28) {
    errors.add("tagger: hash_bits must be in [8, 28]");
  }

  if (root.contains("eval")) {
    const json& e = root["eval"];
    check_keys(e, {"gold", "stopwords"}, "eval", errors);
    get(e, "gold", c.gold_path, "eval", errors);
    get(e, "stopwords", c.stopwords_path, "eval", errors);
  }

  c.fit.jobs = c.jobs;
  c.tagger.jobs = c.jobs;
  if (!errors.empty()) {
    std::string message = "invalid config:";
    for (const std::string& e : errors.list()) message += "\n  " + e;
    throw ConfigError(message);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  fs::path parent = fs::path(path).parent_path();
  ExperimentConfig c = parse_config(text, parent.empty() ? "." : parent.string());
  c.source_path = path;
  return c;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  auto exists = [&](const std::string& path, const std::string& what) {
    if (!fs::exists(c.resolve(path))) {
      errors.push_back(what + ": file not found: " + c.resolve(path));
    }
  };
  const bool synthetic = !c.synthetic_spec.empty();
  if (synthetic) {
    exists(c.synthetic_spec, "corpus.synthetic");
  } else {
    exists(c.corpus_path, "corpus.path");
  }

  std::set<std::string> declared;
  bool any_positive = false;
  for (const LexiconBlock& lex : c.lexicons) {
    declared.insert(lex.name);
    if (lex.polarity > 0) any_positive = true;
    if (lex.synthetic) {
      if (!synthetic) {
        errors.push_back("lexicon " + lex.name +
                         ": synthetic lexicons need a synthetic corpus");
      } else if (lex.name != "disease" && lex.name != "nondisease") {
        errors.push_back("lexicon " + lex.name +
                         ": synthetic lexicons are 'disease' and 'nondisease'");
      }
    } else {
      exists(lex.path, "lexicon " + lex.name);
    }
  }
  if (!any_positive) errors.push_back("no positive lexicon declared");
  if (c.candidates.kind == "dictionary" && !any_positive) {
    errors.push_back("candidates: dictionary generator needs a positive lexicon");
  }

  std::set<std::string> lf_names;
  auto known_lf = [&](const std::string& name, const std::string& where) {
    if (name.empty()) {
      errors.push_back(where + ": missing LF reference");
    } else if (!lf_names.count(name)) {
      errors.push_back(where + ": unknown LF '" + name +
                       "' (must be defined by an earlier block)");
    }
  };
  int i = 0;
  for (const LfBlock& lf : c.lfs) {
    std::string where = "lfs[" + std::to_string(i++) + "] (" + lf.kind + ")";
    for (const std::string& lex : lf.lexicons) {
      if (!declared.count(lex)) {
        errors.push_back(where + ": undeclared lexicon '" + lex + "'");
      }
    }
    if ((lf.kind == "lexicon" || lf.kind == "tailword" || lf.kind == "abbrv") &&
        lf.lexicons.empty() && c.lexicons.empty()) {
      errors.push_back(where + ": no lexicons to use");
    }
    if ((lf.kind == "idf_filter" || lf.kind == "df_filter") && !c.stats_enabled) {
      errors.push_back(where + ": needs \"stats\": {\"enabled\": true}");
    }
    if (lf.kind == "cascade") known_lf(lf.base, where);
    if (lf.kind == "compose") {
      known_lf(lf.a, where);
      known_lf(lf.b, where);
    }
    std::vector<std::string> produced;
    if (lf.kind == "lexicon" || lf.kind == "tailword") {
      std::vector<std::string> names = lf.lexicons;
      if (names.empty()) {
        for (const LexiconBlock& lex : c.lexicons) names.push_back(lex.name);
      }
      for (const std::string& n : names) {
        if (lf.kind == "tailword") {
          bool positive = false;
          for (const LexiconBlock& lex : c.lexicons) {
            if (lex.name == n) positive = lex.polarity > 0;
          }
          if (!positive) continue;
        }
        produced.push_back(lf.kind + ":" + n);
      }
      if (!lf.name.empty() && produced.size() == 1) produced = {lf.name};
    } else if (!lf.name.empty()) {
      produced.push_back(lf.name);
    } else if (lf.kind == "abbrv") {
      produced.push_back("abbrv_def");
    } else if (lf.kind == "idf_filter" || lf.kind == "df_filter" ||
               lf.kind == "phrase_fragment") {
      produced.push_back(lf.kind);
    } else if (lf.kind == "cascade") {
      produced.push_back("cascade(" + lf.base + ")");
    } else if (lf.kind == "compose") {
      produced.push_back((lf.combiner == "and_agree" ? "and(" : "unless(") + lf.a +
                         "," + lf.b + ")");
    }
    for (const std::string& n : produced) {
      if (!lf_names.insert(n).second) {
        errors.push_back(where + ": duplicate LF name '" + n + "'");
      }
    }
  }
  if (c.lfs.empty()) errors.push_back("no labeling functions declared");

  if (!c.gold_path.empty()) {
    if (c.gold_path == "synthetic") {
      if (!synthetic) errors.push_back("eval.gold: synthetic gold needs a synthetic corpus");
    } else {
      exists(c.gold_path, "eval.gold");
    }
  }
  if (!c.stopwords_path.empty()) {
    if (c.stopwords_path == "synthetic") {
      if (!synthetic) {
        errors.push_back("eval.stopwords: synthetic stopwords need a synthetic corpus");
      }
    } else {
      exists(c.stopwords_path, "eval.stopwords");
    }
  }
  return errors;
}

LoadedInputs load_inputs(const ExperimentConfig& c) {
  LoadedInputs in;
  std::optional<SyntheticData> synth;
  if (!c.synthetic_spec.empty()) {
    SyntheticSpec spec = SyntheticSpec::from_json(read_file(c.resolve(c.synthetic_spec)));
    synth = generate_corpus(spec);
    in.corpus = synth->corpus;
  } else {
    in.corpus = load_corpus(c.resolve(c.corpus_path), parse_corpus_format(c.corpus_format));
  }
  for (const LexiconBlock& block : c.lexicons) {
    if (block.synthetic) {
      const Lexicon* found = nullptr;
      for (const Lexicon& lex : synth->lexicons) {
        if (lex.name() == block.name) found = &lex;
      }
      if (found == nullptr) {
        throw DataError("synthetic corpus has no lexicon '" + block.name + "'");
      }
      std::vector<std::string> terms(found->terms().begin(), found->terms().end());
      in.lexicons.emplace_back(block.name, block.polarity, terms, block.case_sensitive);
    } else {
      in.lexicons.push_back(load_lexicon(c.resolve(block.path), block.name,
                                         block.polarity, block.case_sensitive));
    }
  }
  if (c.gold_path == "synthetic") {
    in.gold = synth->gold;
  } else if (!c.gold_path.empty()) {
    in.gold = load_mentions(c.resolve(c.gold_path));
  }
  if (c.stopwords_path == "synthetic") {
    in.stopwords = synth->stopwords;
  } else if (!c.stopwords_path.empty()) {
    in.stopwords = load_stopwords(c.resolve(c.stopwords_path));
  }
  return in;
}

namespace {

class RenamedLf : public LabelingFunction {
 public:
  RenamedLf(LfPtr inner, std::string name)
      : LabelingFunction(std::move(name), inner->kind(), inner->polarity_hint()),
        inner_(std::move(inner)) {}
  int label(const LfContext& ctx, int id) const override {
    return inner_->label(ctx, id);
  }
  std::vector<int8_t> label_all(const LfContext& ctx, int* failures) const override {
    return inner_->label_all(ctx, failures);
  }

 private:
  LfPtr inner_;
};

std::vector<Lexicon> select_lexicons(const std::vector<Lexicon>& all,
                                     const std::vector<std::string>& names) {
  if (names.empty()) return all;
  std::vector<Lexicon> out;
  for (const std::string& n : names) {
    bool found = false;
    for (const Lexicon& lex : all) {
      if (lex.name() == n) {
        out.push_back(lex);
        found = true;
      }
    }
    if (!found) throw ConfigError("undeclared lexicon '" + n + "'");
  }
  return out;
}

}  // namespace

std::vector<LfPtr> build_lfs(const ExperimentConfig& config,
                             const std::vector<Lexicon>& lexicons,
                             const Corpus& corpus,
                             std::shared_ptr<const CorpusStats> stats) {
  std::map<std::string, LfPtr> by_name;
  std::vector<LfPtr> emitted;
  auto lookup = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ConfigError("unknown LF '" + name + "'");
    return it->second;
  };
  for (const LfBlock& block : config.lfs) {
    std::vector<LfPtr> made;
    if (block.kind == "lexicon") {
      made = gen_lexicon_lfs(select_lexicons(lexicons, block.lexicons));
    } else if (block.kind == "tailword") {
      made = gen_tailword_lfs(select_lexicons(lexicons, block.lexicons));
    } else if (block.kind == "abbrv") {
      made = {gen_abbrv_lf(select_lexicons(lexicons, block.lexicons), corpus)};
    } else if (block.kind == "idf_filter") {
      made = {gen_idf_filter_lf(stats, block.threshold)};
    } else if (block.kind == "df_filter") {
      made = {gen_df_filter_lf(stats, static_cast<int>(block.threshold),
                               parse_df_direction(block.direction))};
    } else if (block.kind == "phrase_fragment") {
      made = {gen_phrase_fragment_lf()};
    } else if (block.kind == "cascade") {
      made = {gen_children_cascade(lookup(block.base), block.vote_on_children)};
    } else if (block.kind == "compose") {
      made = {compose(lookup(block.a), lookup(block.b),
                      parse_combiner(block.combiner))};
    } else if (block.kind == "custom") {
      made = {gen_custom_rule(block.rule, block.name)};
    } else {
      throw ConfigError("unknown LF kind '" + block.kind + "'");
    }
    if (!block.name.empty() && made.size() == 1 && made[0]->name() != block.name) {
      made[0] = std::make_shared<RenamedLf>(made[0], block.name);
    }
    for (const LfPtr& lf : made) {
      if (!by_name.emplace(lf->name(), lf).second) {
        throw ConfigError("duplicate LF name '" + lf->name() + "'");
      }
      if (block.emit) emitted.push_back(lf);
    }
  }
  if (emitted.empty()) throw ConfigError("no labeling functions to apply");
  return emitted;
}

CandidateSet generate_candidates(const CandidateBlock& block, const Corpus& corpus,
                                 const std::vector<Lexicon>& lexicons) {
  if (block.kind == "kgram") return generate_kgram(corpus, block.k_max);
  if (block.kind == "dictionary") {
    std::vector<Lexicon> positive;
    for (const Lexicon& lex : lexicons) {
      if (lex.polarity() > 0) positive.push_back(lex);
    }
    return generate_dictionary(corpus, positive, parse_match_mode(block.mode));
  }
  if (block.kind == "noun_phrase") {
    return generate_noun_phrase(
        corpus, block.k_max,
        block.pattern.empty() ? kDefaultNounPhrasePattern : block.pattern);
  }
  throw ConfigError("unknown candidate generator '" + block.kind + "'");
}

Corpus training_documents(const Corpus& corpus) {
  Corpus out;
  for (const Document& doc : corpus.documents()) {
    if (doc.split == Split::kTrain || doc.split == Split::kNone) out.add_document(doc);
  }
  return out;
}

Corpus evaluation_documents(const Corpus& corpus) {
  Corpus test = corpus.subset(Split::kTest);
  return test.empty() ? corpus : test;
}

namespace {

template <typename Writer>
void write_artifact(const fs::path& path, Writer&& writer,
                    std::vector<std::string>& artifacts) {
  std::ofstream out = open_output(path.string());
  writer(out);
  out.close();
  if (!out) throw DataError("failed writing " + path.string());
  artifacts.push_back(path.string());
}

bool in_corpus(const Corpus& corpus, const std::string& doc_id, int sent) {
  return corpus.find_sentence(doc_id, sent) != nullptr;
}

}  // namespace

PipelineSummary run_pipeline(const ExperimentConfig& config, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineSummary summary;
  summary.config_hash = config.hash();
  const std::string& hash = summary.config_hash;
  const fs::path out_dir = config.resolve(config.output_dir);
  std::string stage = "validate";
  auto log = [&](const std::string& message) {
    if (!quiet) std::cerr << "[" << stage << "] " << message << '\n';
  };

  try {
    std::vector<std::string> problems = validate_config(config);
    if (!problems.empty()) {
      std::string message = "invalid config:";
      for (const std::string& p : problems) message += "\n  " + p;
      throw ConfigError(message);
    }
    fs::create_directories(out_dir);

    stage = "ingest";
    LoadedInputs inputs = load_inputs(config);
    const Corpus& corpus = inputs.corpus;
    if (!config.synthetic_spec.empty()) {
      write_artifact(out_dir / "corpus.jsonl",
                     [&](std::ostream& o) { write_corpus_jsonl(corpus, o); },
                     summary.artifacts);
      fs::create_directories(out_dir / "lexicons");
      for (const Lexicon& lex : inputs.lexicons) {
        write_artifact(out_dir / "lexicons" / (lex.name() + ".txt"),
                       [&](std::ostream& o) { write_lexicon(lex, o); },
                       summary.artifacts);
      }
      if (inputs.gold) {
        write_artifact(out_dir / "gold.jsonl",
                       [&](std::ostream& o) { write_mentions(*inputs.gold, o, hash); },
                       summary.artifacts);
      }
    }
    log(std::to_string(corpus.num_documents()) + " documents, " +
        std::to_string(corpus.num_sentences()) + " sentences");

    stage = "stats";
    std::shared_ptr<const CorpusStats> stats;
    if (config.stats_enabled) {
      stats = std::make_shared<CorpusStats>(
          compute_stats(corpus, config.stats_max_ngram));
      write_artifact(out_dir / "stats.tsv",
                     [&](std::ostream& o) { stats->write(o); }, summary.artifacts);
    }

    stage = "candgen";
    CandidateSet candidates =
        generate_candidates(config.candidates, corpus, inputs.lexicons);
    write_artifact(out_dir / "candidates.jsonl",
                   [&](std::ostream& o) { write_candidates(candidates, o, hash); },
                   summary.artifacts);
    log(std::to_string(candidates.size()) + " candidates");

    stage = "label";
    std::vector<LfPtr> lfs = build_lfs(config, inputs.lexicons, corpus, stats);
    LabelMatrix matrix = apply_lfs(lfs, candidates, corpus, config.jobs);
    write_artifact(out_dir / "label_matrix.txt",
                   [&](std::ostream& o) { matrix.write(o, hash); },
                   summary.artifacts);
    log(std::to_string(matrix.entries().size()) + " labels from " +
        std::to_string(lfs.size()) + " LFs");

    stage = "fit";
    PartitionOptions popts;
    popts.k_max_cap = config.k_max_cap;
    PartitionResult part = partition_spansets(candidates, matrix, popts);
    const bool binary = config.fit_mode == "binary";
    std::vector<Spanset> singles;
    if (binary) singles = binary_spansets(candidates, matrix);
    const std::vector<Spanset>& fit_set = binary ? singles : part.spansets;
    LfModel model = fit(fit_set, matrix.lf_names(), config.fit);
    model.binary_mode = binary;
    write_artifact(out_dir / "model.txt",
                   [&](std::ostream& o) { model.write(o, hash); },
                   summary.artifacts);
    log(std::to_string(model.report.iterations) + " EM iterations");

    stage = "marginals";
    std::vector<SpansetMarginal> margs = compute_marginals(fit_set, model);
    write_artifact(out_dir / "marginals.jsonl",
                   [&](std::ostream& o) { write_marginals(margs, o, hash); },
                   summary.artifacts);

    stage = "sample";
    Corpus train_docs = training_documents(corpus);
    if (train_docs.empty()) throw DataError("no training documents");
    std::vector<SpansetMarginal> train_margs;
    for (const SpansetMarginal& m : margs) {
      if (in_corpus(train_docs, m.doc_id, m.sent_index)) train_margs.push_back(m);
    }
    TrainingData data;
    SampleResult sampled;
    if (config.tagger.mode == TaggerMode::kSampledHard) {
      SampleOptions sopts;
      sopts.num_samples = config.num_samples;
      sopts.seed = config.sample_seed;
      sopts.jobs = config.jobs;
      sopts.dropped_sentences = part.dropped_sentences;
      sampled = sample_dataset(train_margs, candidates, train_docs, sopts);
      write_artifact(out_dir / "samples.conll",
                     [&](std::ostream& o) {
                       write_samples(sampled.sentences, train_docs, o, hash);
                     },
                     summary.artifacts);
      data = std::move(sampled.sentences);
    } else {
      auto soft = soft_labels(train_margs, candidates, train_docs);
      write_artifact(out_dir / "soft_labels.jsonl",
                     [&](std::ostream& o) { write_soft_labels(soft, o, hash); },
                     summary.artifacts);
      data = std::move(soft);
    }

    stage = "train";
    TrainReport train_report;
    TaggerModel tagger =
        train_tagger(train_docs, data, inputs.lexicons, config.tagger, &train_report);
    write_artifact(out_dir / "tagger.model",
                   [&](std::ostream& o) { tagger.write(o, hash); },
                   summary.artifacts);
    log(std::to_string(train_report.iterations) + " optimizer iterations over " +
        std::to_string(train_report.sequences) + " sequences");

    stage = "tag";
    Corpus eval_docs = evaluation_documents(corpus);
    std::vector<Mention> predicted = predict_mentions(tagger, eval_docs, config.jobs);
    write_artifact(out_dir / "mentions.jsonl",
                   [&](std::ostream& o) { write_mentions(predicted, o, hash); },
                   summary.artifacts);

    stage = "eval";
    json js;
    js["config_hash"] = hash;
    js["name"] = config.name;
    js["counts"] = {
        {"documents", corpus.num_documents()},
        {"sentences", corpus.num_sentences()},
        {"tokens", corpus.num_tokens()},
        {"train_documents", train_docs.num_documents()},
        {"eval_documents", eval_docs.num_documents()},
        {"candidates", candidates.size()},
        {"lfs", matrix.n_lfs()},
        {"labels", matrix.entries().size()},
        {"density", matrix.density()},
        {"lf_failures", matrix.failures()},
        {"spansets", part.spansets.size()},
        {"dropped_over_cap", part.dropped_over_cap},
        {"bridging_skipped", part.bridging_skipped},
        {"unlabeled_removed", part.unlabeled_removed},
        {"training_sequences", train_report.sequences},
        {"masked_draws", sampled.masked_draws},
        {"all_dropped_sentences", sampled.all_dropped_sentences},
        {"predicted_mentions", predicted.size()}};
    js["fit"] = {{"mode", config.fit_mode},
                 {"iterations", model.report.iterations},
                 {"converged", model.report.converged},
                 {"log_likelihood", model.report.log_likelihood},
                 {"objective", model.report.objective}};
    LfReport lf_stats = lf_report(matrix, candidates, part.spansets,
                                  inputs.gold ? std::optional<std::span<const Mention>>(
                                                    *inputs.gold)
                                              : std::nullopt,
                                  &model);
    json lf_table = json::array();
    for (int i = 0; i < model.n_lfs(); ++i) {
      lf_table.push_back({{"name", model.lf_names[i]},
                          {"alpha", model.accuracies[i]},
                          {"abstain_rate", model.abstain_rates[i]},
                          {"coverage", lf_stats.lfs[i].coverage}});
    }
    js["lfs"] = lf_table;

    std::ostringstream text;
    text << "experiment " << config.name << " (config " << hash << ")\n";
    text << corpus.num_documents() << " documents, " << candidates.size()
         << " candidates, " << part.spansets.size() << " spansets, "
         << matrix.entries().size() << " labels (density "
         << format_double(matrix.density()) << ")\n";
    text << "fit: " << model.report.iterations << " iterations, log-likelihood "
         << format_double(model.report.log_likelihood) << "\n";
    for (const auto& row : lf_table) {
      char line[256];
      std::snprintf(line, sizeof(line), "  %-40s alpha %.3f  coverage %.3f\n",
                    row["name"].get<std::string>().c_str(),
                    row["alpha"].get<double>(), row["coverage"].get<double>());
      text << line;
    }

    if (inputs.gold) {
      std::vector<Mention> gold = restrict_to(*inputs.gold, eval_docs);
      std::vector<Spanset> eval_spansets;
      for (const Spanset& s : part.spansets) {
        if (in_corpus(eval_docs, s.doc_id, s.sent_index)) eval_spansets.push_back(s);
      }
      std::map<std::string, ScoreReport> scores;
      scores["lexicon"] = score_mentions(
          lexicon_baseline(eval_docs, inputs.lexicons, inputs.stopwords), gold);
      scores["majority_vote"] =
          score_mentions(majority_vote(eval_spansets, candidates), gold);
      if (binary) {
        scores["binary_model"] = score_mentions(
            restrict_to(binary_predictions(model, candidates, matrix), eval_docs), gold);
      } else {
        scores["label_model"] =
            score_mentions(model_argmax(eval_spansets, model, candidates), gold);
      }
      scores["tagger"] = score_mentions(predicted, gold);
      json js_scores;
      text << "scores on " << eval_docs.num_documents() << " held-out documents ("
           << gold.size() << " gold mentions):\n";
      for (const auto& [system, s] : scores) {
        js_scores[system] = json::parse(score_json(s));
        text << "  " << format_score_row(system, s) << '\n';
      }
      js["scores"] = js_scores;
      summary.tagger_f1 = scores["tagger"].f1;
      summary.lexicon_f1 = scores["lexicon"].f1;
    }
    summary.json = js.dump(2);
    summary.text = text.str();
    write_artifact(out_dir / "summary.json",
                   [&](std::ostream& o) { o << summary.json << '\n'; },
                   summary.artifacts);
    write_artifact(out_dir / "summary.txt",
                   [&](std::ostream& o) { o << summary.text; }, summary.artifacts);
  } catch (const Error& e) {
    std::string message = "stage " + stage + " failed: " + e.what();
    if (!summary.artifacts.empty()) {
      message += "\ncompleted artifacts:";
      for (const std::string& a : summary.artifacts) message += "\n  " + a;
    }
    if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(message);
    throw DataError(message);
  } catch (const fs::filesystem_error& e) {
    throw DataError("stage " + stage + " failed: " + e.what());
  }
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace weaktag
