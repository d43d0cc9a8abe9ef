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

#include "weaktag/labeling.h"

#include <algorithm>
#include <cctype>
#include <exception>
#include <map>
#include <thread>

#include "weaktag/error.h"

namespace weaktag {

const char* lf_kind_name(LfKind kind) {
  switch (kind) {
    case LfKind::kLexiconMember: return "lexicon_member";
    case LfKind::kTailWord: return "tail_word";
    case LfKind::kAbbrvDef: return "abbrv_def";
    case LfKind::kIdfFilter: return "idf_filter";
    case LfKind::kDfFilter: return "df_filter";
    case LfKind::kPhraseFragment: return "phrase_fragment";
    case LfKind::kChildrenCascade: return "children_cascade";
    case LfKind::kComposition: return "composition";
    case LfKind::kCustomRule: return "custom_rule";
  }
  return "unknown";
}

LfContext::LfContext(const Corpus& corpus, const CandidateSet& candidates)
    : corpus_(&corpus), candidates_(&candidates) {
  group_sentences_.reserve(candidates.groups().size());
  for (const auto& group : candidates.groups()) {
    const Sentence* s = corpus.find_sentence(group.doc_id, group.sent_index);
    if (s == nullptr) {
      throw DataError("candidate sentence (" + group.doc_id + ", " +
                      std::to_string(group.sent_index) + ") not in corpus");
    }
    group_sentences_.push_back(s);
  }
}

std::vector<int8_t> LabelingFunction::label_all(const LfContext& ctx,
                                                int* failures) const {
  const int n = static_cast<int>(ctx.candidates().size());
  std::vector<int8_t> out(n, 0);
  for (int id = 0; id < n; ++id) {
    try {
      out[id] = static_cast<int8_t>(label(ctx, id));
    } catch (const std::exception&) {
      out[id] = 0;
      if (failures != nullptr) ++*failures;
    }
  }
  return out;
}

namespace {

class LexiconMemberLf : public LabelingFunction {
 public:
  explicit LexiconMemberLf(const Lexicon& lexicon)
      : LabelingFunction("lexicon:" + lexicon.name(), LfKind::kLexiconMember,
                         lexicon.polarity()),
        lexicon_(lexicon) {}

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    if (c.length() > lexicon_.max_term_tokens()) return 0;
    std::string key = span_key(ctx.sentence(id), c.token_start, c.token_end,
                               lexicon_.case_sensitive());
    return lexicon_.contains(key) ? lexicon_.polarity() : 0;
  }

 private:
  Lexicon lexicon_;
};

class TailWordLf : public LabelingFunction {
 public:
  explicit TailWordLf(const Lexicon& lexicon)
      : LabelingFunction("tailword:" + lexicon.name(), LfKind::kTailWord,
                         lexicon.polarity()),
        lexicon_(lexicon) {}

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    const Token& tail = ctx.sentence(id).tokens[c.token_end - 1];
    std::string key = normalize_term(tail.text, lexicon_.case_sensitive());
    return lexicon_.contains_single_token(key) ? lexicon_.polarity() : 0;
  }

 private:
  Lexicon lexicon_;
};

bool is_open_paren(const std::string& t) { return t == "(" || t == "-LRB-"; }
bool is_close_paren(const std::string& t) { return t == ")" || t == "-RRB-"; }

class AbbrvDefLf : public LabelingFunction {
 public:
  AbbrvDefLf(std::span<const Lexicon> lexicons, const Corpus& corpus)
      : LabelingFunction("abbrv_def", LfKind::kAbbrvDef, 0) {
    for (const Document& doc : corpus.documents()) {
      auto& forms = short_forms_[doc.doc_id];
      for (const Sentence& s : doc.sentences) {
        for (int i = 1; i + 2 < s.size(); ++i) {
          if (!is_open_paren(s.tokens[i].text) ||
              !is_close_paren(s.tokens[i + 2].text)) {
            continue;
          }
          const std::string& short_form = s.tokens[i + 1].text;
          if (forms.count(short_form)) continue;
          int polarity = find_long_form(lexicons, s, i, short_form);
          if (polarity != 0) forms.emplace(short_form, polarity);
        }
      }
      if (forms.empty()) short_forms_.erase(doc.doc_id);
    }
  }

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    auto doc = short_forms_.find(c.doc_id);
    if (doc == short_forms_.end()) return 0;
    auto it = doc->second.find(c.text);
    return it == doc->second.end() ? 0 : it->second;
  }

 private:
  // Longest lexicon term ending right before the parenthesis at `paren`.
  static int find_long_form(std::span<const Lexicon> lexicons,
                            const Sentence& s, int paren,
                            const std::string& short_form) {
    int max_len = 0;
    for (const Lexicon& lex : lexicons) {
      max_len = std::max(max_len, lex.max_term_tokens());
    }
    for (int len = std::min(max_len, paren); len >= 1; --len) {
      std::string surface = span_text(s, paren - len, paren);
      if (!is_abbreviation_of(short_form, surface)) continue;
      for (const Lexicon& lex : lexicons) {
        if (lex.contains(span_key(s, paren - len, paren, lex.case_sensitive()))) {
          return lex.polarity();
        }
      }
    }
    return 0;
  }

  std::unordered_map<std::string, std::map<std::string, int>> short_forms_;
};

class IdfFilterLf : public LabelingFunction {
 public:
  IdfFilterLf(std::shared_ptr<const CorpusStats> stats, double threshold)
      : LabelingFunction("idf_filter", LfKind::kIdfFilter, -1),
        stats_(std::move(stats)), threshold_(threshold) {}

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    if (c.length() > stats_->max_ngram()) return 0;
    auto idf = stats_->idf(span_key(ctx.sentence(id), c.token_start, c.token_end));
    if (!idf) return 0;
    return *idf <= threshold_ ? -1 : 0;
  }

 private:
  std::shared_ptr<const CorpusStats> stats_;
  double threshold_;
};

class DfFilterLf : public LabelingFunction {
 public:
  DfFilterLf(std::shared_ptr<const CorpusStats> stats, int threshold,
             DfDirection direction)
      : LabelingFunction("df_filter", LfKind::kDfFilter, -1),
        stats_(std::move(stats)), threshold_(threshold), direction_(direction) {}

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    if (c.length() > stats_->max_ngram()) return 0;
    int df = stats_->df(span_key(ctx.sentence(id), c.token_start, c.token_end));
    if (df == 0) return 0;
    bool reject = direction_ == DfDirection::kRejectAbove ? df > threshold_
                                                          : df <= threshold_;
    return reject ? -1 : 0;
  }

 private:
  std::shared_ptr<const CorpusStats> stats_;
  int threshold_;
  DfDirection direction_;
};

class PhraseFragmentLf : public LabelingFunction {
 public:
  PhraseFragmentLf()
      : LabelingFunction("phrase_fragment", LfKind::kPhraseFragment, -1) {}

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    const std::string& pos = ctx.sentence(id).tokens[c.token_end - 1].pos;
    return (pos == "JJ" || pos == "JJR" || pos == "JJS") ? -1 : 0;
  }
};

class ChildrenCascadeLf : public LabelingFunction {
 public:
  ChildrenCascadeLf(LfPtr base, int vote_on_children, std::string name)
      : LabelingFunction(std::move(name), LfKind::kChildrenCascade, 0),
        base_(std::move(base)), vote_on_children_(vote_on_children) {}

  int label(const LfContext& ctx, int id) const override {
    const auto& group =
        ctx.candidates().groups()[ctx.candidates().group_of(id)];
    std::vector<int8_t> base(group.last - group.first);
    for (int c = group.first; c < group.last; ++c) {
      base[c - group.first] = static_cast<int8_t>(base_->label(ctx, c));
    }
    std::vector<int8_t> out(base.size(), 0);
    cascade(ctx, group.first, group.last, base.data(), out.data());
    return out[id - group.first];
  }

  std::vector<int8_t> label_all(const LfContext& ctx,
                                int* failures) const override {
    std::vector<int8_t> base = base_->label_all(ctx, failures);
    std::vector<int8_t> out(base.size(), 0);
    for (const auto& group : ctx.candidates().groups()) {
      cascade(ctx, group.first, group.last, base.data() + group.first,
              out.data() + group.first);
    }
    return out;
  }

 private:
  // `base` and `out` are indexed relative to `first`.
  void cascade(const LfContext& ctx, int first, int last, const int8_t* base,
               int8_t* out) const {
    std::vector<int> positives;
    for (int c = first; c < last; ++c) {
      if (base[c - first] > 0) positives.push_back(c);
    }
    std::vector<int> tops;
    for (int p : positives) {
      bool nested = false;
      for (int q : positives) {
        if (q != p && ctx.candidate(q).contains(ctx.candidate(p))) {
          nested = true;
          break;
        }
      }
      if (!nested) tops.push_back(p);
    }
    for (int t : tops) {
      out[t - first] = 1;
      for (int c = first; c < last; ++c) {
        if (ctx.candidate(t).contains(ctx.candidate(c))) {
          out[c - first] = static_cast<int8_t>(vote_on_children_);
        }
      }
    }
  }

  LfPtr base_;
  int vote_on_children_;
};

class CompositionLf : public LabelingFunction {
 public:
  CompositionLf(LfPtr a, LfPtr b, Combiner combiner, std::string name)
      : LabelingFunction(std::move(name), LfKind::kComposition,
                         a->polarity_hint()),
        a_(std::move(a)), b_(std::move(b)), combiner_(combiner) {}

  int label(const LfContext& ctx, int id) const override {
    return combine(a_->label(ctx, id), b_->label(ctx, id));
  }

  std::vector<int8_t> label_all(const LfContext& ctx,
                                int* failures) const override {
    std::vector<int8_t> a = a_->label_all(ctx, failures);
    std::vector<int8_t> b = b_->label_all(ctx, failures);
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = static_cast<int8_t>(combine(a[i], b[i]));
    }
    return a;
  }

 private:
  int combine(int a, int b) const {
    if (combiner_ == Combiner::kAndAgree) return (a != 0 && a == b) ? a : 0;
    return b != 0 ? 0 : a;
  }

  LfPtr a_;
  LfPtr b_;
  Combiner combiner_;
};

std::string lower(std::string_view s) { return normalize_term(s, false); }

class CustomRuleLf : public LabelingFunction {
 public:
  CustomRuleLf(const CustomRule& rule, std::string name)
      : LabelingFunction(std::move(name), LfKind::kCustomRule, rule.label),
        rule_(rule) {
    if (rule.label != 1 && rule.label != -1) {
      throw ConfigError("custom rule '" + this->name() +
                        "': label must be +1 or -1");
    }
    for (const std::string& t : rule.tokens) tokens_.insert(lower(t));
    if (rule.type == CustomRule::Type::kSurfaceRegex) {
      try {
        regex_ = std::regex(rule.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw ConfigError("custom rule '" + this->name() +
                          "': invalid regex '" + rule.pattern + "': " +
                          e.what());
      }
    } else if (tokens_.empty()) {
      throw ConfigError("custom rule '" + this->name() + "': empty token set");
    }
    if (rule.type == CustomRule::Type::kContextWindow && rule.window < 1) {
      throw ConfigError("custom rule '" + this->name() + "': window must be >= 1");
    }
  }

  int label(const LfContext& ctx, int id) const override {
    const Candidate& c = ctx.candidate(id);
    const Sentence& s = ctx.sentence(id);
    switch (rule_.type) {
      case CustomRule::Type::kHeadTokenInSet:
        return tokens_.count(lower(s.tokens[c.token_start].text)) ? rule_.label
                                                                  : 0;
      case CustomRule::Type::kSurfaceRegex:
        return std::regex_search(c.text, regex_) ? rule_.label : 0;
      case CustomRule::Type::kContextWindow: {
        bool left = rule_.side != CustomRule::Side::kRight;
        bool right = rule_.side != CustomRule::Side::kLeft;
        if (left) {
          for (int i = std::max(0, c.token_start - rule_.window);
               i < c.token_start; ++i) {
            if (tokens_.count(lower(s.tokens[i].text))) return rule_.label;
          }
        }
        if (right) {
          for (int i = c.token_end;
               i < std::min(s.size(), c.token_end + rule_.window); ++i) {
            if (tokens_.count(lower(s.tokens[i].text))) return rule_.label;
          }
        }
        return 0;
      }
    }
    return 0;
  }

 private:
  CustomRule rule_;
  std::set<std::string> tokens_;
  std::regex regex_;
};

}  // namespace

std::vector<LfPtr> gen_lexicon_lfs(std::span<const Lexicon> lexicons) {
  std::vector<LfPtr> out;
  for (const Lexicon& lex : lexicons) {
    out.push_back(std::make_shared<LexiconMemberLf>(lex));
  }
  return out;
}

std::vector<LfPtr> gen_tailword_lfs(std::span<const Lexicon> lexicons) {
  std::vector<LfPtr> out;
  for (const Lexicon& lex : lexicons) {
    out.push_back(std::make_shared<TailWordLf>(lex));
  }
  return out;
}

bool is_abbreviation_of(std::string_view short_form, std::string_view long_form) {
  std::string s;
  bool has_alpha = false;
  for (char c : short_form) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) s.push_back(static_cast<char>(std::tolower(u)));
    if (std::isalpha(u)) has_alpha = true;
  }
  if (s.size() < 2 || s.size() > 10 || !has_alpha) return false;
  std::string l = normalize_term(long_form, false);
  if (l.size() <= s.size()) return false;

  auto word_start = [&](size_t i) {
    return i == 0 || l[i - 1] == ' ' || l[i - 1] == '-';
  };
  // In-order: first character at a word start, the rest as a subsequence.
  for (size_t p = 0; p < l.size(); ++p) {
    if (l[p] != s[0] || !word_start(p)) continue;
    size_t k = 1;
    for (size_t q = p + 1; q < l.size() && k < s.size(); ++q) {
      if (l[q] == s[k]) ++k;
    }
    if (k == s.size()) return true;
    break;
  }
  // Permuted initialism.
  std::string initials;
  for (size_t i = 0; i < l.size(); ++i) {
    if (word_start(i) && std::isalnum(static_cast<unsigned char>(l[i]))) {
      initials.push_back(l[i]);
    }
  }
  std::string sorted_short = s;
  std::sort(sorted_short.begin(), sorted_short.end());
  std::sort(initials.begin(), initials.end());
  return sorted_short == initials;
}

LfPtr gen_abbrv_lf(std::span<const Lexicon> lexicons, const Corpus& corpus) {
  return std::make_shared<AbbrvDefLf>(lexicons, corpus);
}

DfDirection parse_df_direction(std::string_view name) {
  if (name == "reject_above") return DfDirection::kRejectAbove;
  if (name == "reject_at_or_below") return DfDirection::kRejectAtOrBelow;
  throw ConfigError("unknown df filter direction '" + std::string(name) + "'");
}

LfPtr gen_idf_filter_lf(std::shared_ptr<const CorpusStats> stats,
                        double idf_threshold) {
  if (!stats) throw ConfigError("idf filter requires corpus statistics");
  return std::make_shared<IdfFilterLf>(std::move(stats), idf_threshold);
}

LfPtr gen_df_filter_lf(std::shared_ptr<const CorpusStats> stats,
                       int df_threshold, DfDirection direction) {
  if (!stats) throw ConfigError("df filter requires corpus statistics");
  return std::make_shared<DfFilterLf>(std::move(stats), df_threshold, direction);
}

std::vector<LfPtr> gen_filter_lfs(std::shared_ptr<const CorpusStats> stats,
                                  double idf_threshold, int df_threshold,
                                  DfDirection direction) {
  return {gen_idf_filter_lf(stats, idf_threshold),
          gen_df_filter_lf(stats, df_threshold, direction)};
}

LfPtr gen_phrase_fragment_lf() { return std::make_shared<PhraseFragmentLf>(); }

LfPtr gen_children_cascade(LfPtr base, int vote_on_children, std::string name) {
  if (!base) throw ConfigError("children cascade needs a base LF");
  if (vote_on_children != 1 && vote_on_children != -1) {
    throw ConfigError("children cascade vote must be +1 or -1");
  }
  if (name.empty()) name = "cascade(" + base->name() + ")";
  return std::make_shared<ChildrenCascadeLf>(std::move(base), vote_on_children,
                                             std::move(name));
}

Combiner parse_combiner(std::string_view name) {
  if (name == "and_agree") return Combiner::kAndAgree;
  if (name == "a_unless_b") return Combiner::kAUnlessB;
  throw ConfigError("unknown combiner '" + std::string(name) + "'");
}

LfPtr compose(LfPtr a, LfPtr b, Combiner combiner, std::string name) {
  if (!a || !b) throw ConfigError("composition needs two LFs");
  if (name.empty()) {
    name = (combiner == Combiner::kAndAgree ? "and(" : "unless(") + a->name() +
           "," + b->name() + ")";
  }
  return std::make_shared<CompositionLf>(std::move(a), std::move(b), combiner,
                                         std::move(name));
}

const std::vector<std::string>& default_temporal_modifiers() {
  static const std::vector<std::string> kWords = {
      "recurrent", "childhood", "chronic",   "early",  "late",
      "transient", "persistent", "previous", "prior",  "recent",
      "adult",     "neonatal",  "juvenile",  "onset",  "history"};
  return kWords;
}

LfPtr gen_custom_rule(const CustomRule& rule, std::string name) {
  return std::make_shared<CustomRuleLf>(rule, std::move(name));
}

LabelMatrix apply_lfs(std::span<const LfPtr> lfs, const CandidateSet& candidates,
                      const Corpus& corpus, int jobs) {
  LfContext ctx(corpus, candidates);
  const int m = static_cast<int>(lfs.size());
  std::vector<std::vector<int8_t>> columns(m);
  std::vector<int> failures(m, 0);

  auto run = [&](int worker, int n_workers) {
    for (int j = worker; j < m; j += n_workers) {
      columns[j] = lfs[j]->label_all(ctx, &failures[j]);
    }
  };
  int n_workers = std::max(1, std::min(jobs, m));
  if (n_workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(run, w, n_workers);
    for (auto& t : threads) t.join();
  }

  std::vector<LabelEntry> entries;
  for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
    for (int j = 0; j < m; ++j) {
      if (columns[j][c] != 0) entries.push_back({c, j, columns[j][c]});
    }
  }
  std::vector<std::string> names;
  names.reserve(m);
  for (const LfPtr& lf : lfs) names.push_back(lf->name());
  LabelMatrix matrix(static_cast<int>(candidates.size()), std::move(names),
                     std::move(entries));
  int total_failures = 0;
  for (int f : failures) total_failures += f;
  matrix.set_failures(total_failures);
  return matrix;
}

}  // namespace weaktag
