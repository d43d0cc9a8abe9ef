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

// Pre-tokenized, POS-tagged documents, lexicons and n-gram document
// frequency statistics. Everything here is immutable once loaded.

#ifndef WEAKTAG_CORPUS_H_
#define WEAKTAG_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace weaktag {

struct Token {
  std::string text;
  std::string pos;
  int char_start = 0;
  int char_end = 0;  // exclusive

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::string doc_id;
  int sent_index = 0;
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
  bool operator==(const Sentence&) const = default;
};

enum class Split { kNone, kTrain, kDev, kTest };

const char* split_name(Split split);
Split parse_split(std::string_view name);

struct Document {
  std::string doc_id;
  Split split = Split::kNone;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;

  // Validates token offsets and identifier uniqueness; throws DataError.
  void add_document(Document doc);

  const std::vector<Document>& documents() const { return docs_; }
  size_t num_documents() const { return docs_.size(); }
  size_t num_sentences() const;
  size_t num_tokens() const;
  bool empty() const { return docs_.empty(); }

  const Document* find_document(std::string_view doc_id) const;
  const Sentence* find_sentence(std::string_view doc_id, int sent_index) const;

  // Position of a document in file order, or -1.
  int document_position(std::string_view doc_id) const;

  // Documents whose split equals `split`, in file order.
  Corpus subset(Split split) const;

  bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, size_t> doc_pos_;
};

enum class CorpusFormat { kJsonl, kConll };

CorpusFormat parse_corpus_format(std::string_view name);

Corpus load_corpus(const std::string& path, CorpusFormat format);
Corpus read_corpus(std::istream& in, CorpusFormat format,
                   const std::string& source = "<stream>");
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);
void write_corpus_conll(const Corpus& corpus, std::ostream& out);

// Collapses runs of whitespace to one space, trims, and lower-cases ASCII
// unless `case_sensitive`. Idempotent.
std::string normalize_term(std::string_view term, bool case_sensitive = false);

// Normalized key of tokens [begin, end): token texts joined by one space.
std::string span_key(const Sentence& sentence, int begin, int end,
                     bool case_sensitive = false);

// Surface text of tokens [begin, end). Tokens separated by a character gap
// are joined with one space, adjacent tokens are concatenated.
std::string span_text(const Sentence& sentence, int begin, int end);

class Lexicon {
 public:
  // Normalizes and deduplicates `terms`; throws DataError when nothing is
  // left and ConfigError when polarity is not +1 or -1.
  Lexicon(std::string name, int polarity, const std::vector<std::string>& terms,
          bool case_sensitive = false);

  const std::string& name() const { return name_; }
  int polarity() const { return polarity_; }
  bool case_sensitive() const { return case_sensitive_; }
  const std::set<std::string>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  // `key` must already be normalized with this lexicon's case rule.
  bool contains(const std::string& key) const { return terms_.count(key) > 0; }
  bool contains_single_token(const std::string& key) const {
    return single_tokens_.count(key) > 0;
  }
  int max_term_tokens() const { return max_term_tokens_; }

 private:
  std::string name_;
  int polarity_;
  bool case_sensitive_;
  std::set<std::string> terms_;
  std::set<std::string> single_tokens_;
  int max_term_tokens_ = 0;
};

// One term per line; blank lines and lines starting with '#' are ignored.
Lexicon load_lexicon(const std::string& path, const std::string& name,
                     int polarity, bool case_sensitive = false);
void write_lexicon(const Lexicon& lexicon, std::ostream& out);

// Document frequency of lower-cased n-grams, n <= max_ngram.
class CorpusStats {
 public:
  CorpusStats() = default;
  CorpusStats(int n_docs, int max_ngram,
              std::unordered_map<std::string, int> df);

  int n_docs() const { return n_docs_; }
  int max_ngram() const { return max_ngram_; }
  size_t num_terms() const { return df_.size(); }

  // 0 when the term was never seen.
  int df(const std::string& term) const;
  // ln(n_docs / df); nullopt for unseen terms.
  std::optional<double> idf(const std::string& term) const;

  const std::unordered_map<std::string, int>& df_table() const { return df_; }

  // TSV: "# n_docs N max_ngram K" then "term<TAB>df<TAB>idf" sorted by term.
  void write(std::ostream& out) const;
  static CorpusStats read(std::istream& in);

 private:
  int n_docs_ = 0;
  int max_ngram_ = 0;
  std::unordered_map<std::string, int> df_;
};

CorpusStats compute_stats(const Corpus& corpus, int max_ngram);

}  // namespace weaktag

#endif  // WEAKTAG_CORPUS_H_
