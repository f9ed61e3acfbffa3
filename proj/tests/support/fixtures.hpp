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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "program_gen.hpp"

namespace abcd::testing {

inline std::string fixture_path(const std::string& relative) {
  return std::string(ABCD_FIXTURES_DIR) + "/" + relative;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("abcd-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct CorpusSpec {
  std::vector<std::string> datasets = {"synthetic"};
  std::size_t files_per_dataset = 100;
  std::set<std::size_t> unparsable;  // global file indices to replace with broken code
  std::size_t lines = 40;
  std::uint64_t seed = 1;
};

// Writes generated programs and a manifest into `dir`; returns the manifest path.
inline std::string write_corpus(const TempDir& dir, const CorpusSpec& spec) {
  ProgramGenerator gen(spec.seed);
  std::string manifest;
  std::size_t index = 0;
  for (const auto& dataset : spec.datasets) {
    for (std::size_t k = 0; k < spec.files_per_dataset; ++k, ++index) {
      std::string id = dataset + "-" + std::to_string(k);
      std::string text = gen.program(spec.lines);
      if (spec.unparsable.count(index)) text = "def broken(:\n    pass\n";
      spit(dir.path() / (id + ".vp"), text);
      manifest += "{\"id\": \"" + id + "\", \"path\": \"" + id + ".vp\", \"dataset\": \"" +
                  dataset + "\"}\n";
    }
  }
  std::string path = dir.file("manifest.jsonl");
  spit(path, manifest);
  return path;
}

// Node and attribute counts read straight off an oracle sexpr dump.
struct SexprCounts {
  std::size_t nodes = 0;
  std::size_t attributes = 0;
};

inline SexprCounts count_sexpr(const std::string& text) {
  SexprCounts counts;
  bool in_string = false;
  bool token_start = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '(') {
      ++counts.nodes;
      token_start = false;  // the kind name follows
      while (i + 1 < text.size() && text[i + 1] != ' ' && text[i + 1] != ')') ++i;
    } else if (c == ' ') {
      token_start = true;
      continue;
    } else if (token_start && c != ')' && c != '\n') {
      ++counts.attributes;
    }
    token_start = false;
  }
  return counts;
}

}  // namespace abcd::testing
