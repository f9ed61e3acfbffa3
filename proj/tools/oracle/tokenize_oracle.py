#!/usr/bin/env python3
#  Copyright 2026 The ABCD analyzer authors.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
"""Golden query tokenizations from NLTK's word tokenizer.

Reads a JSON array of queries, each query an array of segments where a
segment is either a string (literal text) or null (an interpolation hole).
Every literal segment is tokenized on its own with
``nltk.word_tokenize(segment, preserve_line=True)``; a hole contributes the
single token "⟨HOLE⟩". Writes {"queries": [{"segments", "tokens"}]}.

Usage: tokenize_oracle.py QUERIES.json OUT.json
"""

import json
import sys

from nltk.tokenize import word_tokenize

HOLE = "⟨HOLE⟩"


def tokenize(segments):
    tokens = []
    for seg in segments:
        if seg is None:
            tokens.append(HOLE)
        else:
            tokens.extend(word_tokenize(seg, preserve_line=True))
    return tokens


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    with open(argv[1], encoding="utf-8") as handle:
        queries = json.load(handle)
    out = {"queries": [{"segments": q, "tokens": tokenize(q)} for q in queries]}
    with open(argv[2], "w", encoding="utf-8", newline="\n") as handle:
        json.dump(out, handle, ensure_ascii=False, indent=1)
        handle.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
