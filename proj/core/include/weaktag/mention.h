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

#ifndef WEAKTAG_MENTION_H_
#define WEAKTAG_MENTION_H_

#include <string>
#include <tuple>

namespace weaktag {

// A predicted or gold entity span. Identity is the span key; text is
// informational.
struct Mention {
  std::string doc_id;
  int sent_index = 0;
  int token_start = 0;
  int token_end = 0;  // exclusive
  std::string text;

  auto key() const {
    return std::tie(doc_id, sent_index, token_start, token_end);
  }
  bool operator==(const Mention& other) const { return key() == other.key(); }
  bool operator<(const Mention& other) const { return key() < other.key(); }
};

}  // namespace weaktag

#endif  // WEAKTAG_MENTION_H_
