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

#include "weaktag/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"

namespace weaktag {

using json = nlohmann::json;

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kNone: break;
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  if (name.empty()) return Split::kNone;
  throw DataError("unknown split '" + std::string(name) + "'");
}

void Corpus::add_document(Document doc) {
  if (doc.doc_id.empty()) throw DataError("document with empty doc_id");
  if (doc_pos_.count(doc.doc_id)) {
    throw DataError("duplicate doc_id '" + doc.doc_id + "'");
  }
  std::set<int> seen_index;
  for (Sentence& sentence : doc.sentences) {
    sentence.doc_id = doc.doc_id;
    if (!seen_index.insert(sentence.sent_index).second) {
      throw DataError("doc '" + doc.doc_id + "': duplicate sent_index " +
                      std::to_string(sentence.sent_index));
    }
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& tok = sentence.tokens[i];
      if (tok.text.empty()) {
        throw DataError("doc '" + doc.doc_id + "' sentence " +
                        std::to_string(sentence.sent_index) + ": empty token");
      }
      if (tok.char_start >= tok.char_end || tok.char_start < 0) {
        throw DataError("doc '" + doc.doc_id + "' sentence " +
                        std::to_string(sentence.sent_index) + " token " +
                        std::to_string(i) + ": invalid offsets");
      }
      if (i > 0 && tok.char_start < sentence.tokens[i - 1].char_end) {
        throw DataError("doc '" + doc.doc_id + "' sentence " +
                        std::to_string(sentence.sent_index) + " token " +
                        std::to_string(i) + ": overlapping token offsets");
      }
    }
  }
  doc_pos_.emplace(doc.doc_id, docs_.size());
  docs_.push_back(std::move(doc));
}

size_t Corpus::num_sentences() const {
  size_t n = 0;
  for (const Document& doc : docs_) n += doc.sentences.size();
  return n;
}

size_t Corpus::num_tokens() const {
  size_t n = 0;
  for (const Document& doc : docs_) {
    for (const Sentence& s : doc.sentences) n += s.tokens.size();
  }
  return n;
}

const Document* Corpus::find_document(std::string_view doc_id) const {
  auto it = doc_pos_.find(std::string(doc_id));
  return it == doc_pos_.end() ? nullptr : &docs_[it->second];
}

const Sentence* Corpus::find_sentence(std::string_view doc_id,
                                      int sent_index) const {
  const Document* doc = find_document(doc_id);
  if (doc == nullptr) return nullptr;
  // Sentences are almost always stored at their own index.
  if (sent_index >= 0 && sent_index < static_cast<int>(doc->sentences.size()) &&
      doc->sentences[sent_index].sent_index == sent_index) {
    return &doc->sentences[sent_index];
  }
  for (const Sentence& s : doc->sentences) {
    if (s.sent_index == sent_index) return &s;
  }
  return nullptr;
}

int Corpus::document_position(std::string_view doc_id) const {
  auto it = doc_pos_.find(std::string(doc_id));
  return it == doc_pos_.end() ? -1 : static_cast<int>(it->second);
}

Corpus Corpus::subset(Split split) const {
  Corpus out;
  for (const Document& doc : docs_) {
    if (doc.split == split) out.add_document(doc);
  }
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "conll") return CorpusFormat::kConll;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

namespace {

Document parse_jsonl_document(const std::string& line, int line_no,
                              const std::string& source) {
  auto fail = [&](const std::string& doc_id, const std::string& what) {
    std::string where = source + ":" + std::to_string(line_no);
    if (!doc_id.empty()) where += " (doc '" + doc_id + "')";
    return DataError(where + ": " + what);
  };
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object() || !record.contains("doc_id") ||
      !record["doc_id"].is_string()) {
    throw fail("", "record lacks a string doc_id");
  }
  Document doc;
  doc.doc_id = record["doc_id"].get<std::string>();
  try {
    if (record.contains("split")) {
      doc.split = parse_split(record["split"].get<std::string>());
    }
    if (!record.contains("sentences") || !record["sentences"].is_array()) {
      throw fail(doc.doc_id, "missing sentences array");
    }
    int position = 0;
    for (const json& js : record["sentences"]) {
      Sentence sentence;
      sentence.doc_id = doc.doc_id;
      sentence.sent_index = js.value("sent_index", position);
      if (!js.contains("tokens") || !js["tokens"].is_array()) {
        throw fail(doc.doc_id, "sentence " + std::to_string(position) +
                                   " lacks a tokens array");
      }
      for (const json& jt : js["tokens"]) {
        if (!jt.contains("text") || !jt.contains("pos") ||
            !jt.contains("start") || !jt.contains("end")) {
          throw fail(doc.doc_id, "sentence " + std::to_string(position) +
                                     ": token lacks text/pos/start/end");
        }
        Token tok;
        tok.text = jt["text"].get<std::string>();
        tok.pos = jt["pos"].get<std::string>();
        tok.char_start = jt["start"].get<int>();
        tok.char_end = jt["end"].get<int>();
        sentence.tokens.push_back(std::move(tok));
      }
      doc.sentences.push_back(std::move(sentence));
      ++position;
    }
  } catch (const json::exception& e) {
    throw fail(doc.doc_id, std::string("bad field type: ") + e.what());
  } catch (const DataError& e) {
    std::string what = e.what();
    if (what.starts_with(source)) throw;
    throw fail(doc.doc_id, what);
  }
  return doc;
}

void add_checked(Corpus& corpus, Document doc, int line_no,
                 const std::string& source) {
  try {
    corpus.add_document(std::move(doc));
  } catch (const DataError& e) {
    throw DataError(source + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

Corpus read_jsonl(std::istream& in, const std::string& source) {
  Corpus corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (is_meta_line(line)) continue;
    add_checked(corpus, parse_jsonl_document(line, line_no, source), line_no,
                source);
  }
  return corpus;
}

// Offsets are rebuilt by joining every token of a document with one space.
Corpus read_conll(std::istream& in, const std::string& source) {
  Corpus corpus;
  Document doc;
  Sentence sentence;
  int offset = 0;
  int doc_line = 1;
  int line_no = 0;
  bool have_doc = false;

  auto flush_sentence = [&] {
    if (sentence.tokens.empty()) return;
    sentence.sent_index = static_cast<int>(doc.sentences.size());
    sentence.doc_id = doc.doc_id;
    doc.sentences.push_back(std::move(sentence));
    sentence = Sentence();
    have_doc = true;
  };
  auto flush_doc = [&] {
    flush_sentence();
    if (have_doc) add_checked(corpus, std::move(doc), doc_line, source);
    doc = Document();
    have_doc = false;
    offset = 0;
  };

  doc.doc_id = "doc0";
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("-DOCSTART-")) {
      flush_doc();
      std::string id = normalize_term(line.substr(10), true);
      doc.doc_id = id.empty() ? "doc" + std::to_string(corpus.num_documents())
                              : id;
      doc_line = line_no;
      have_doc = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush_sentence();
      continue;
    }
    if (line.starts_with("#")) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(source + ":" + std::to_string(line_no) + " (doc '" +
                      doc.doc_id + "'): expected TEXT<TAB>POS");
    }
    size_t tab2 = line.find('\t', tab + 1);
    Token tok;
    tok.text = line.substr(0, tab);
    tok.pos = line.substr(tab + 1, tab2 == std::string::npos
                                       ? std::string::npos
                                       : tab2 - tab - 1);
    if (tok.pos.empty()) {
      throw DataError(source + ":" + std::to_string(line_no) + " (doc '" +
                      doc.doc_id + "'): empty POS tag");
    }
    tok.char_start = offset;
    tok.char_end = offset + static_cast<int>(tok.text.size());
    offset = tok.char_end + 1;
    sentence.tokens.push_back(std::move(tok));
  }
  flush_doc();
  return corpus;
}

}  // namespace

Corpus read_corpus(std::istream& in, CorpusFormat format,
                   const std::string& source) {
  return format == CorpusFormat::kJsonl ? read_jsonl(in, source)
                                        : read_conll(in, source);
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in = open_input(path);
  return read_corpus(in, format, path);
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    json record;
    record["doc_id"] = doc.doc_id;
    if (doc.split != Split::kNone) record["split"] = split_name(doc.split);
    json sentences = json::array();
    for (const Sentence& s : doc.sentences) {
      json tokens = json::array();
      for (const Token& t : s.tokens) {
        tokens.push_back({{"text", t.text},
                          {"pos", t.pos},
                          {"start", t.char_start},
                          {"end", t.char_end}});
      }
      sentences.push_back({{"sent_index", s.sent_index}, {"tokens", tokens}});
    }
    record["sentences"] = std::move(sentences);
    out << record.dump() << '\n';
  }
}

void write_corpus_conll(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    out << "-DOCSTART- " << doc.doc_id << "\n\n";
    for (const Sentence& s : doc.sentences) {
      for (const Token& t : s.tokens) out << t.text << '\t' << t.pos << '\n';
      out << '\n';
    }
  }
}

std::string normalize_term(std::string_view term, bool case_sensitive) {
  std::string out;
  out.reserve(term.size());
  bool pending_space = false;
  for (char c : term) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(case_sensitive
                      ? c
                      : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string span_key(const Sentence& sentence, int begin, int end,
                     bool case_sensitive) {
  std::string joined;
  for (int i = begin; i < end; ++i) {
    if (i > begin) joined.push_back(' ');
    joined += sentence.tokens[i].text;
  }
  return normalize_term(joined, case_sensitive);
}

std::string span_text(const Sentence& sentence, int begin, int end) {
  std::string out;
  for (int i = begin; i < end; ++i) {
    const Token& tok = sentence.tokens[i];
    if (i > begin && tok.char_start > sentence.tokens[i - 1].char_end) {
      out.push_back(' ');
    }
    out += tok.text;
  }
  return out;
}

Lexicon::Lexicon(std::string name, int polarity,
                 const std::vector<std::string>& terms, bool case_sensitive)
    : name_(std::move(name)), polarity_(polarity),
      case_sensitive_(case_sensitive) {
  if (polarity != 1 && polarity != -1) {
    throw ConfigError("lexicon '" + name_ + "': polarity must be +1 or -1");
  }
  for (const std::string& raw : terms) {
    std::string term = normalize_term(raw, case_sensitive);
    if (term.empty()) continue;
    int n_tokens = 1 + static_cast<int>(std::count(term.begin(), term.end(), ' '));
    max_term_tokens_ = std::max(max_term_tokens_, n_tokens);
    if (n_tokens == 1) single_tokens_.insert(term);
    terms_.insert(std::move(term));
  }
  if (terms_.empty()) throw DataError("lexicon '" + name_ + "' is empty");
}

Lexicon load_lexicon(const std::string& path, const std::string& name,
                     int polarity, bool case_sensitive) {
  std::ifstream in = open_input(path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    terms.push_back(line);
  }
  try {
    return Lexicon(name, polarity, terms, case_sensitive);
  } catch (const DataError&) {
    throw DataError("lexicon '" + name + "' (" + path + ") has no terms");
  }
}

void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  for (const std::string& term : lexicon.terms()) out << term << '\n';
}

CorpusStats::CorpusStats(int n_docs, int max_ngram,
                         std::unordered_map<std::string, int> df)
    : n_docs_(n_docs), max_ngram_(max_ngram), df_(std::move(df)) {}

int CorpusStats::df(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

std::optional<double> CorpusStats::idf(const std::string& term) const {
  int d = df(term);
  if (d <= 0) return std::nullopt;
  return std::log(static_cast<double>(n_docs_) / d);
}

void CorpusStats::write(std::ostream& out) const {
  out << "# n_docs " << n_docs_ << " max_ngram " << max_ngram_ << '\n';
  std::vector<const std::pair<const std::string, int>*> rows;
  rows.reserve(df_.size());
  for (const auto& kv : df_) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  for (const auto* kv : rows) {
    out << kv->first << '\t' << kv->second << '\t'
        << format_double(std::log(static_cast<double>(n_docs_) / kv->second))
        << '\n';
  }
}

CorpusStats CorpusStats::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("# n_docs ")) {
    throw DataError("stats file lacks '# n_docs' header");
  }
  std::istringstream header(line.substr(2));
  std::string key1, key2;
  int n_docs = 0, max_ngram = 0;
  header >> key1 >> n_docs >> key2 >> max_ngram;
  if (!header || key2 != "max_ngram") throw DataError("bad stats header");
  std::unordered_map<std::string, int> df;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError("stats line " + std::to_string(line_no) + " malformed");
    }
    df[line.substr(0, t1)] = std::stoi(line.substr(t1 + 1, t2 - t1 - 1));
  }
  return CorpusStats(n_docs, max_ngram, std::move(df));
}

CorpusStats compute_stats(const Corpus& corpus, int max_ngram) {
  if (max_ngram < 1) throw ConfigError("max_ngram must be >= 1");
  std::unordered_map<std::string, int> df;
  for (const Document& doc : corpus.documents()) {
    std::set<std::string> seen;
    for (const Sentence& s : doc.sentences) {
      for (int b = 0; b < s.size(); ++b) {
        std::string key;
        for (int e = b + 1; e <= std::min(s.size(), b + max_ngram); ++e) {
          if (e > b + 1) key.push_back(' ');
          key += normalize_term(s.tokens[e - 1].text);
          seen.insert(key);
        }
      }
    }
    for (const std::string& term : seen) ++df[term];
  }
  return CorpusStats(static_cast<int>(corpus.num_documents()), max_ngram,
                     std::move(df));
}

}  // namespace weaktag
