// Copyright 2026 The Stylo Authors.
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

// Shared fixtures for the unit and acceptance tests.

#ifndef STYLO_TESTS_TEST_SUPPORT_H_
#define STYLO_TESTS_TEST_SUPPORT_H_

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/rng.h"
#include "stylo/synth.h"
#include "stylo/timestamp.h"

namespace stylo::testing {

inline Timestamp at(const std::string& iso) {
  auto t = parse_timestamp(iso);
  if (!t) throw std::invalid_argument("bad timestamp " + iso);
  return *t;
}

inline Text text(const std::string& id, const std::string& iso, std::string body) {
  return {id, at(iso), std::move(body)};
}

// Lowercase letters and spaces from a fixed seed.
inline std::string random_body(size_t n, uint64_t seed,
                               std::string_view alphabet = "abcdefghij ") {
  Rng rng(seed);
  std::string out;
  for (size_t i = 0; i < n; ++i) out += alphabet[rng.index(alphabet.size())];
  return out;
}

// A cleaned synthetic corpus.
inline Corpus synthetic_corpus(size_t students,
                               const std::map<synth::Archetype, double>& mix,
                               uint64_t seed, synth::SynthOptions options = {}) {
  return clean_corpus(synth::gen_corpus(students, mix, seed, options).corpus,
                      CleaningConfig{});
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("stylo_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stylo::testing

#endif  // STYLO_TESTS_TEST_SUPPORT_H_
