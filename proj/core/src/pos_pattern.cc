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

#include "weaktag/pos_pattern.h"

#include <cctype>

#include "weaktag/error.h"

namespace weaktag {

namespace {

bool is_tag_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '*' ||
         c == '+' || c == '?' || c == '$' || c == '[' || c == ']' ||
         c == '-' || c == '_' || c == '^' || c == ',' || c == ':' ||
         c == '\'' || c == '`';
}

// Each tag is rendered as "<TAG>" in the subject string, so a tag
// expression becomes "<(?:...)>" with '.' restricted to non-'>' chars.
std::string translate_tag(std::string_view tag) {
  std::string out = "<(?:";
  bool in_class = false;
  for (char c : tag) {
    if (c == '[') in_class = true;
    if (c == ']') in_class = false;
    if (c == '.' && !in_class) {
      out += "[^>]";
    } else if (c == '$' || c == '^') {
      out += in_class && c == '^' ? "^" : std::string("\\") + c;
    } else if (c == '`') {
      out += "`";
    } else {
      out.push_back(c);
    }
  }
  out += ")>";
  return out;
}

}  // namespace

PosPattern::PosPattern(std::string source, std::string regex_source)
    : source_(std::move(source)), regex_source_(std::move(regex_source)) {
  try {
    regex_ = std::regex(regex_source_, std::regex::ECMAScript |
                                           std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid POS pattern '" + source_ + "': " + e.what());
  }
}

PosPattern PosPattern::compile(std::string_view pattern) {
  std::string out;
  int depth = 0;
  bool has_atom = false;
  size_t i = 0;
  auto error = [&](const std::string& what) {
    return ConfigError("invalid POS pattern '" + std::string(pattern) +
                       "': " + what);
  };
  while (i < pattern.size()) {
    char c = pattern[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out += "(?:";
      ++depth;
      ++i;
    } else if (c == ')') {
      if (depth == 0) throw error("unbalanced ')'");
      --depth;
      out += ")";
      ++i;
      if (i < pattern.size() &&
          (pattern[i] == '*' || pattern[i] == '+' || pattern[i] == '?')) {
        out.push_back(pattern[i]);
        ++i;
      }
    } else if (c == '|') {
      out += "|";
      ++i;
    } else if (is_tag_char(c)) {
      if (c == '*' || c == '+' || c == '?') {
        throw error("quantifier without a parenthesized group");
      }
      size_t start = i;
      while (i < pattern.size() && is_tag_char(pattern[i])) ++i;
      out += translate_tag(pattern.substr(start, i - start));
      has_atom = true;
    } else {
      throw error(std::string("unexpected character '") + c + "'");
    }
  }
  if (depth != 0) throw error("unbalanced '('");
  if (!has_atom) throw error("no tag expressions");
  return PosPattern(std::string(pattern), out);
}

bool PosPattern::matches(std::span<const std::string> tags) const {
  std::string subject;
  for (const std::string& tag : tags) {
    subject.push_back('<');
    subject += tag;
    subject.push_back('>');
  }
  return std::regex_match(subject, regex_);
}

bool PosPattern::matches(const Sentence& sentence, int begin, int end) const {
  std::string subject;
  for (int i = begin; i < end; ++i) {
    subject.push_back('<');
    subject += sentence.tokens[i].pos;
    subject.push_back('>');
  }
  return std::regex_match(subject, regex_);
}

}  // namespace weaktag
