/*  Copyright 2026 The ABCD analyzer authors.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License. */

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace abcd {

// Token emitted for one interpolation hole.
inline constexpr std::string_view kHoleToken = "\u27e8HOLE\u27e9";

// Treebank-style word tokenization of one literal text segment, following the
// rule cascade of NLTK's word tokenizer (single-sentence mode): starting
// quotes, punctuation, brackets, double dashes, ending quotes, contractions,
// then a whitespace split. Input and output are UTF-8.
std::vector<std::string> tokenize_text(std::string_view text);

}  // namespace abcd
