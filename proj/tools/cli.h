/*
 * Copyright 2026 The mrlwe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef MRLWE_TOOLS_CLI_H_
#define MRLWE_TOOLS_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrlwe/params.h"
#include "mrlwe/rng.h"

namespace mrlwe::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or statistical test failure
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

inline constexpr int kConfigVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// args excludes the program name. Results go to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Relative output paths land under $MRLWE_OUTPUT_DIR when it is set.
std::filesystem::path ResolveOutput(const std::filesystem::path& path);

struct BenchRow {
  std::string params;
  size_t n = 0;
  size_t runs = 0;
  double ntt_ms = 0.0;         // median wall clock
  double schoolbook_ms = 0.0;  // median wall clock
  bool equal = false;
  double speedup() const { return schoolbook_ms / ntt_ms; }
};

// Times transform-based against schoolbook multiplication of one random pair.
BenchRow BenchMultiplication(const RingParams& params, size_t runs, Rng& rng);
void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace mrlwe::cli

#endif  // MRLWE_TOOLS_CLI_H_
