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


#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrlwe/gaussian.h"
#include "mrlwe/reductions.h"
#include "mrlwe/ring.h"
#include "mrlwe/rlwe.h"
#include "mrlwe/sigdemo.h"
#include "mrlwe/stats.h"

namespace mrlwe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path ResolveOutput(const fs::path& path) {
  const char* dir = std::getenv("MRLWE_OUTPUT_DIR");
  fs::path resolved = (dir != nullptr && *dir != '\0' && path.is_relative()) ? fs::path(dir) / path : path;
  if (resolved.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(resolved.parent_path(), ec);
    if (ec) throw IoError("cannot create " + resolved.parent_path().string() + ": " + ec.message());
  }
  return resolved;
}

namespace {

// Thrown when parameters are well formed but inadmissible.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

// Options shared by most subcommands.
struct Common {
  std::vector<Uint64> m = {4, 4};
  Uint64 q = 13;
  std::string seed = std::string(64, '0');
  std::string config;
};

void AddRingOptions(CLI::App* sub, Common& c) {
  sub->add_option("--m", c.m, "conductors, comma separated")->delimiter(',')->capture_default_str();
  sub->add_option("--q", c.q, "prime modulus")->capture_default_str();
}

void AddSeedOption(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "64 hex digits")->capture_default_str();
}

void AddConfigOption(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "flat JSON file; flags override its values");
}

std::string ConfigScalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number() || v.is_null()) return v.dump();
  throw UsageError("config: nested values are not supported");
}

// Fills every option of `sub` not given on the command line from the file.
void ApplyConfig(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in = OpenInput(path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!config.is_object()) throw UsageError("config must be a JSON object");
  if (!config.contains("version") || config["version"] != kConfigVersion) {
    throw UsageError("config: \"version\": " + std::to_string(kConfigVersion) + " required");
  }
  for (const auto& [key, value] : config.items()) {
    if (key == "version") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw UsageError("config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const json& item : value) opt->add_result(ConfigScalar(item));
    } else {
      opt->add_result(ConfigScalar(value));
    }
    opt->run_callback();
  }
}

Seed SeedFrom(const std::string& hex) {
  try {
    return ParseSeed(hex);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--seed: ") + e.what());
  }
}

RingParams ValidParams(const Common& c) {
  RingParams params = [&] {
    try {
      return RingParams::Create(c.m, c.q);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  ValidationReport report = Validate(params);
  if (!report.valid()) {
    std::string all;
    for (const auto& f : report.failures) all += (all.empty() ? "" : "; ") + f;
    throw ValidationError(params.ToString() + ": " + all);
  }
  return params;
}

RlweContextPtr ValidContext(const Common& c) {
  RingParams params = ValidParams(c);
  try {
    return RlweContext::Create(params);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
}

void Emit(std::ostream& out, const json& report, const std::string& path) {
  out << report.dump(2) << "\n";
  if (!path.empty()) {
    std::ofstream file = OpenOutput(ResolveOutput(path));
    file << report.dump(2) << "\n";
  }
}

// Deterministic, thread-safe stand-ins for useless oracles: outputs depend
// only on the query data and a salt.
Uint64 HashSamples(std::span<const RlweSample> batch, Uint64 salt) {
  Uint64 h = 1469598103934665603ULL ^ salt;
  for (const RlweSample& s : batch) {
    for (Uint64 v : s.a.data()) h = (h ^ v) * 1099511628211ULL;
    for (Uint64 v : s.b) h = (h ^ v) * 1099511628211ULL;
  }
  return h ^ (h >> 29);
}

// --- params ---------------------------------------------------------------

struct ParamsArgs {
  Common c;
  double alpha = 0.0;
  Uint64 samples = 1;
  std::string out;
};

int CmdParams(const ParamsArgs& args, bool with_alpha, std::ostream& out) {
  RingParams params = [&] {
    try {
      return RingParams::Create(args.c.m, args.c.q);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  ValidationReport report = Validate(params);
  json j{{"params", params.ToString()},
         {"valid", report.valid()},
         {"failures", report.failures},
         {"degrees", params.degrees()},
         {"n", params.total_degree()},
         {"roots", params.roots()},
         {"power_of_two", params.AllPowerOfTwo()}};
  if (with_alpha) {
    CheckAlpha(args.alpha);
    if (args.samples == 0) throw UsageError("--samples must be positive");
    RateReport rates = CheckRates(params, {args.alpha, args.alpha, args.samples});
    j["security"] = {{"alpha", args.alpha},
                     {"samples", args.samples},
                     {"xi", rates.xi},
                     {"rate_bound", rates.rate_bound},
                     {"alpha_below_rate", rates.alpha_below_rate},
                     {"alpha_q", rates.alpha_q},
                     {"alpha_q_floor", rates.alpha_q_floor},
                     {"alpha_q_above_floor", rates.alpha_q_above_floor}};
  }
  Emit(out, j, args.out);
  return report.valid() ? kExitOk : kExitFailure;
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  Common c;
  std::string dist = "rlwe";
  double alpha = 0.01;
  size_t level = 0;
  Uint64 count = 1000;
  Int64 p = 2;
  std::string out;
  std::string secret_out;
};

int CmdSample(const SampleArgs& args, std::ostream& out) {
  if (args.out.empty()) throw UsageError("sample: --out is required");
  if (args.count == 0) throw UsageError("sample: --count must be positive");
  RlweContextPtr ctx = ValidContext(args.c);
  const RingParams& params = ctx->params();
  Rng rng(SeedFrom(args.c.seed));
  SecretKey key = SecretKey::Random(*ctx, rng);
  const bool needs_error = args.dist != "uniform";
  if (needs_error) CheckAlpha(args.alpha);
  if (args.dist == "hybrid" && args.level > ctx->n()) {
    throw ValidationError("hybrid level exceeds n = " + std::to_string(ctx->n()));
  }
  std::optional<GaussianSpec> psi;
  if (needs_error) psi = GaussianSpec::Spherical(params, args.alpha);

  fs::path path = ResolveOutput(args.out);
  std::ofstream file = OpenOutput(path);
  if (args.dist == "discrete") {
    if (args.p < 1 || Gcd(static_cast<Uint64>(args.p), params.q()) != 1) {
      throw ValidationError("discrete: p must be a positive unit mod q");
    }
    std::vector<Int64> w(ctx->n(), 0);
    std::vector<DiscreteSample> stream;
    for (Uint64 i = 0; i < args.count; ++i) {
      stream.push_back(ToDiscrete(*ctx, SampleRlwe(*ctx, key, *psi, rng), args.p, w));
    }
    WriteDiscreteSamples(file, params, stream);
  } else {
    std::vector<RlweSample> stream;
    stream.reserve(args.count);
    for (Uint64 i = 0; i < args.count; ++i) {
      if (args.dist == "rlwe") {
        stream.push_back(SampleRlwe(*ctx, key, *psi, rng));
      } else if (args.dist == "uniform") {
        stream.push_back(SampleUniformPair(*ctx, rng));
      } else {
        stream.push_back(SampleHybrid(*ctx, key, *psi, args.level, rng));
      }
    }
    WriteSamples(file, *ctx, stream);
  }
  if (!file) throw IoError("write failed: " + path.string());
  json j{{"file", path.string()}, {"dist", args.dist},      {"count", args.count},
         {"params", params.ToString()}, {"seed", args.c.seed},
         {"fraction_bits", args.dist == "discrete" ? 0 : ctx->fraction_bits()}};
  if (needs_error) j["alpha"] = args.alpha;
  if (args.dist == "hybrid") j["level"] = args.level;
  if (args.dist == "discrete") j["p"] = args.p;
  if (!args.secret_out.empty()) {
    fs::path secret_path = ResolveOutput(args.secret_out);
    std::ofstream secret = OpenOutput(secret_path);
    std::vector<std::uint8_t> bytes = SerializeCoefficients(key.s);
    secret.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!secret) throw IoError("write failed: " + secret_path.string());
    j["secret"] = secret_path.string();
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

// --- test -----------------------------------------------------------------

struct TestArgs {
  std::string in;
  std::string secret;
  double threshold = kDefaultThreshold;
  std::string out;
  std::string histogram;
};

int CmdTest(const TestArgs& args, std::ostream& out) {
  if (args.in.empty()) throw UsageError("test: --in is required");
  if (!(args.threshold > 0.0 && args.threshold < 1.0)) throw UsageError("test: threshold in (0, 1)");
  std::ifstream in = OpenInput(args.in);
  SampleFile file = ReadSampleFile(in);
  RingParams params = file.params();
  if (!Validate(params).valid()) throw ValidationError("file parameters are inadmissible");
  const Uint64 q = params.q();
  std::vector<std::vector<Uint64>> a_rows = file.a, b_rows;
  b_rows.reserve(file.b.size());
  for (const auto& b : file.b) {
    std::vector<Uint64> row;
    for (Uint64 v : b) row.push_back(v >> file.fraction_bits);
    b_rows.push_back(std::move(row));
  }
  std::vector<TestVerdict> verdicts;
  try {
    verdicts.push_back(ChiSquareUniform(a_rows, q, args.threshold));
    verdicts.back().name = "uniform_a";
    verdicts.push_back(ChiSquareUniform(b_rows, q, args.threshold));
    verdicts.back().name = "uniform_b";
    if (!args.secret.empty()) {
      RingContextPtr ring = RingContext::Create(params);
      std::ifstream secret_in = OpenInput(args.secret);
      std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(secret_in)), {});
      RingElement s = [&] {
        try {
          return DeserializeCoefficients(ring, bytes);
        } catch (const std::invalid_argument& e) {
          throw FormatError(std::string("secret file: ") + e.what());
        }
      }();
      std::vector<std::vector<Uint64>> residual_rows;
      if (file.fraction_bits > 0) {
        RlweContextPtr ctx = RlweContext::Create(params, file.fraction_bits);
        for (const RlweSample& sample : ToRlweSamples(*ctx, file)) {
          residual_rows.push_back(ResidualSlots(*ctx, s, sample));
        }
      } else {
        for (const DiscreteSample& sample : ToDiscreteSamples(ring, file)) {
          residual_rows.push_back((sample.b - sample.a * s).ToSlots().data());
        }
      }
      verdicts.push_back(ChiSquareUniform(residual_rows, q, args.threshold));
      verdicts.back().name = "uniform_residual_slots";
    }
  } catch (const InsufficientData& e) {
    throw ValidationError(e.what());
  }
  bool pass = true;
  json list = json::array();
  for (const TestVerdict& v : verdicts) {
    pass = pass && v.pass;
    list.push_back(v.ToJson());
  }
  json j{{"file", args.in}, {"params", params.ToString()}, {"samples", file.a.size()},
         {"verdicts", list}, {"pass", pass}};
  if (!args.histogram.empty()) {
    std::vector<Uint64> counts(q, 0);
    for (const auto& row : b_rows) ++counts[row[0]];
    std::ofstream csv = OpenOutput(ResolveOutput(args.histogram));
    WriteHistogramCsv(csv, counts);
  }
  Emit(out, j, args.out);
  return pass ? kExitOk : kExitFailure;
}

// --- reduce ---------------------------------------------------------------

struct ReduceArgs {
  Common c;
  std::string mode = "search";
  std::string oracle = "planted";
  double alpha = 0.01;
  size_t slot = 0;
  size_t level = 1;
  size_t count = 16;
  size_t trials = 200;
  size_t batch = 16;
  std::string transcript;
  std::string out;
};

int CmdReduce(const ReduceArgs& args, std::ostream& out) {
  RlweContextPtr ctx = ValidContext(args.c);
  CheckAlpha(args.alpha);
  const size_t n = ctx->n();
  if (args.slot >= n) throw ValidationError("--slot must be below n = " + std::to_string(n));
  if (args.trials == 0 || args.batch == 0 || args.count == 0) {
    throw UsageError("--trials, --batch and --count must be positive");
  }
  const bool planted = args.oracle == "planted";
  Rng rng(SeedFrom(args.c.seed));
  SecretKey key = SecretKey::Random(*ctx, rng);
  GaussianSpec psi = GaussianSpec::Spherical(ctx->params(), args.alpha);
  Transcript transcript(ctx->params());
  const Uint64 salt = rng.NextU64();
  json j{{"mode", args.mode}, {"oracle", args.oracle}, {"params", ctx->params().ToString()},
         {"seed", args.c.seed}, {"alpha", args.alpha}};
  int code = kExitOk;

  if (args.mode == "search") {
    std::vector<RlweSample> stream;
    for (size_t i = 0; i < args.count; ++i) stream.push_back(SampleRlwe(*ctx, key, psi, rng));
    QiLweSolver solver = planted ? PlantedQiSolver(ctx, args.slot)
                                 : QiLweSolver([salt, q = ctx->q()](std::span<const RlweSample> s) {
                                     return HashSamples(s, salt) % q;
                                   });
    size_t calls = 0;
    QiLweSolver counted = [&](std::span<const RlweSample> s) {
      ++calls;
      return solver(s);
    };
    try {
      SecretKey found = SearchFromQi(*ctx, counted, args.slot, stream, &transcript);
      j["recovered"] = found.s == key.s;
    } catch (const OracleFailure& e) {
      j["recovered"] = false;
      j["error"] = e.what();
    }
    j["target_slot"] = args.slot;
    j["oracle_calls"] = calls;
    code = j["recovered"].get<bool>() ? kExitOk : kExitFailure;
  } else if (args.mode == "hybrid") {
    Distinguisher oracle = planted ? PlantedSlotDistinguisher(ctx, key.s, args.slot)
                                   : Distinguisher([salt](std::span<const RlweSample> s) {
                                       return (HashSamples(s, salt) & 1) == 1;
                                     });
    HybridWalkResult walk = HybridWalk(*ctx, oracle, key, psi, {args.trials, args.batch}, rng, &transcript);
    j["profile"] = walk.profile;
    j["radius"] = walk.radius;
    j["endpoint_gap"] = walk.endpoint_gap;
    j["queries"] = walk.queries;
    j["gap_found"] = walk.level.has_value();
    j["level"] = walk.level ? json(*walk.level) : json(nullptr);
    if (planted) j["planted_slot"] = args.slot;
  } else if (args.mode == "solve") {
    if (args.level < 1 || args.level > n) throw ValidationError("--level must lie in [1, n]");
    Distinguisher oracle = planted ? PlantedSlotDistinguisher(ctx, key.s, args.level - 1)
                                   : Distinguisher([salt](std::span<const RlweSample> s) {
                                       return (HashSamples(s, salt) & 1) == 1;
                                     });
    SampleSource source = [&](Rng& r) { return SampleRlwe(*ctx, key, psi, r); };
    WdlweConfig config;
    config.batch = args.batch;
    config.trials = args.trials;
    const Uint64 expected = key.s.ToSlots().data()[args.level - 1];
    j["level"] = args.level;
    try {
      QiSolveResult result = SolveQiWithWdlwe(*ctx, oracle, source, args.level, config, rng, &transcript);
      j["residue"] = result.residue;
      j["acceptance"] = result.acceptance;
      j["radius"] = result.radius;
      j["queries"] = result.queries;
      j["correct"] = result.residue == expected;
      code = result.residue == expected ? kExitOk : kExitFailure;
    } catch (const OracleTooWeak& e) {
      j["error"] = e.what();
      j["correct"] = false;
      code = kExitFailure;
    }
  } else {
    throw UsageError("unknown mode " + args.mode);
  }
  if (!args.transcript.empty()) {
    fs::path path = ResolveOutput(args.transcript);
    std::ofstream file = OpenOutput(path);
    transcript.WriteJsonl(file);
    if (!file) throw IoError("write failed: " + path.string());
    j["transcript"] = path.string();
  }
  Emit(out, j, args.out);
  return code;
}

// --- bench ----------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> params = {"m=8x8;q=17", "m=128x128;q=257"};
  size_t runs = 5;
  std::string seed = std::string(64, '0');
  std::string out;
  std::string config;
};

int CmdBench(const BenchArgs& args, std::ostream& out) {
  if (args.runs == 0) throw UsageError("--runs must be positive");
  Rng rng(SeedFrom(args.seed));
  std::vector<BenchRow> rows;
  for (const std::string& text : args.params) {
    RingParams params = [&] {
      try {
        return RingParams::Parse(text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }();
    if (!Validate(params).valid()) throw ValidationError(text + " is inadmissible");
    rows.push_back(BenchMultiplication(params, args.runs, rng));
  }
  if (args.out.empty()) {
    WriteBenchCsv(out, rows);
  } else {
    std::ofstream file = OpenOutput(ResolveOutput(args.out));
    WriteBenchCsv(file, rows);
  }
  bool all_equal = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.equal; });
  return all_equal ? kExitOk : kExitFailure;
}

// --- demo -----------------------------------------------------------------

struct DemoArgs {
  std::string image;
  std::string kernel = "blur3";
  std::string seed = std::string(64, '0');
  std::string out;
  std::string report;
  std::string config;
};

int CmdDemo(const DemoArgs& args, std::ostream& out) {
  if (args.image.empty()) throw UsageError("demo encrypt2d: --image is required");
  if (args.kernel != "blur3" && args.kernel != "identity") throw UsageError("unknown kernel " + args.kernel);
  Image image = ReadPgm(args.image);
  DemoScheme scheme(DemoParams{});
  const size_t rows = scheme.ring()->params().degrees()[1];
  const size_t cols = scheme.ring()->params().degrees()[0];
  if (image.rows > rows || image.cols > cols) {
    throw ValidationError("image must fit in " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Rng rng(SeedFrom(args.seed));
  RingElement s = scheme.KeyGen(rng);
  std::vector<Uint64> msg = PackImage(scheme, image);
  std::vector<Uint64> kernel = args.kernel == "blur3" ? Blur3Kernel(scheme) : IdentityKernel(scheme);
  Ciphertext product = scheme.Mul(scheme.Encrypt(msg, s, rng), scheme.Encrypt(kernel, s, rng));
  std::vector<Uint64> decrypted = scheme.Decrypt(product, s);
  const Uint64 t = scheme.params().t;
  Image result = UnpackImage(scheme, decrypted, t - 1);
  std::vector<Uint64> expected = NegacyclicConvolve2D(UnpackImage(scheme, msg, t - 1).pixels,
                                                      UnpackImage(scheme, kernel, t - 1).pixels,
                                                      rows, cols, t);
  const bool match = result.pixels == expected;
  json j{{"image", args.image},
         {"kernel", args.kernel},
         {"params", scheme.ring()->params().ToString()},
         {"t", t},
         {"components", product.components.size()},
         {"budget_bits", scheme.BudgetBits(product)},
         {"predicted_bound", scheme.PredictedBound(product)},
         {"measured_noise", scheme.MeasuredNoise(product, s)},
         {"match", match}};
  if (!args.out.empty()) {
    fs::path path = ResolveOutput(args.out);
    WritePgm(path, result);
    j["out"] = path.string();
  }
  Emit(out, j, args.report);
  return match ? kExitOk : kExitFailure;
}

}  // namespace

BenchRow BenchMultiplication(const RingParams& params, size_t runs, Rng& rng) {
  using Clock = std::chrono::steady_clock;
  RingContextPtr ring = RingContext::Create(params);
  RingElement a = RingElement::Random(ring, rng), b = RingElement::Random(ring, rng);
  auto median_ms = [&](auto&& op, RingElement& result) {
    std::vector<double> times;
    for (size_t r = 0; r < runs; ++r) {
      auto start = Clock::now();
      result = op();
      times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    return times[times.size() / 2];
  };
  RingElement fast = RingElement::Zero(ring), slow = RingElement::Zero(ring);
  BenchRow row;
  row.params = params.ToString();
  row.n = params.total_degree();
  row.runs = runs;
  row.ntt_ms = median_ms([&] { return a * b; }, fast);
  row.schoolbook_ms = median_ms([&] { return a.MulSchoolbook(b); }, slow);
  row.equal = fast == slow;
  return row;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "params,n,runs,ntt_median_ms,schoolbook_median_ms,speedup,equal\n";
  for (const BenchRow& r : rows) {
    std::ostringstream line;
    line << std::setprecision(6) << r.params << ',' << r.n << ',' << r.runs << ',' << r.ntt_ms << ','
         << r.schoolbook_ms << ',' << r.speedup() << ',' << (r.equal ? "true" : "false") << '\n';
    out << line.str();
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mrlwe: multivariate ring-LWE experiments"};
  app.require_subcommand(1);

  ParamsArgs params_args;
  CLI::App* params_cmd = app.add_subcommand("params", "validate parameters and report derived widths");
  AddRingOptions(params_cmd, params_args.c);
  AddConfigOption(params_cmd, params_args.c);
  CLI::Option* alpha_opt = params_cmd->add_option("--alpha", params_args.alpha, "error rate");
  params_cmd->add_option("--samples", params_args.samples, "sample budget l")->capture_default_str();
  params_cmd->add_option("--out", params_args.out, "also write the report here");

  SampleArgs sample_args;
  CLI::App* sample_cmd = app.add_subcommand("sample", "write a sample stream in MRLW format");
  AddRingOptions(sample_cmd, sample_args.c);
  AddSeedOption(sample_cmd, sample_args.c);
  AddConfigOption(sample_cmd, sample_args.c);
  sample_cmd->add_option("--dist", sample_args.dist)
      ->check(CLI::IsMember({"rlwe", "uniform", "hybrid", "discrete"}))
      ->capture_default_str();
  sample_cmd->add_option("--alpha", sample_args.alpha)->capture_default_str();
  sample_cmd->add_option("--level", sample_args.level, "hybrid level j")->capture_default_str();
  sample_cmd->add_option("--count", sample_args.count)->capture_default_str();
  sample_cmd->add_option("--p", sample_args.p, "discretization factor")->capture_default_str();
  sample_cmd->add_option("--out", sample_args.out, "sample file");
  sample_cmd->add_option("--secret-out", sample_args.secret_out, "secret as little-endian u64");

  TestArgs test_args;
  std::string test_config;
  CLI::App* test_cmd = app.add_subcommand("test", "run the statistical suites on a sample file");
  test_cmd->add_option("--config", test_config);
  test_cmd->add_option("--in", test_args.in, "sample file");
  test_cmd->add_option("--secret", test_args.secret, "secret file for the residual test");
  test_cmd->add_option("--threshold", test_args.threshold)->capture_default_str();
  test_cmd->add_option("--out", test_args.out, "also write the verdicts here");
  test_cmd->add_option("--histogram", test_args.histogram, "CSV histogram of b[0]");

  ReduceArgs reduce_args;
  CLI::App* reduce_cmd = app.add_subcommand("reduce", "run a reduction with a planted or random oracle");
  AddRingOptions(reduce_cmd, reduce_args.c);
  AddSeedOption(reduce_cmd, reduce_args.c);
  AddConfigOption(reduce_cmd, reduce_args.c);
  reduce_cmd->add_option("--mode", reduce_args.mode)
      ->check(CLI::IsMember({"search", "hybrid", "solve"}))
      ->capture_default_str();
  reduce_cmd->add_option("--oracle", reduce_args.oracle)
      ->check(CLI::IsMember({"planted", "random"}))
      ->capture_default_str();
  reduce_cmd->add_option("--alpha", reduce_args.alpha)->capture_default_str();
  reduce_cmd->add_option("--slot", reduce_args.slot, "0-based slot")->capture_default_str();
  reduce_cmd->add_option("--level", reduce_args.level, "1-based level for solve")->capture_default_str();
  reduce_cmd->add_option("--count", reduce_args.count, "stream length for search")->capture_default_str();
  reduce_cmd->add_option("--trials", reduce_args.trials)->capture_default_str();
  reduce_cmd->add_option("--batch", reduce_args.batch)->capture_default_str();
  reduce_cmd->add_option("--transcript", reduce_args.transcript, "JSONL transcript");
  reduce_cmd->add_option("--out", reduce_args.out, "also write the report here");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time NTT against schoolbook multiplication");
  bench_cmd->add_option("--config", bench_args.config);
  bench_cmd->add_option("--params", bench_args.params, "e.g. m=8x8;q=17, repeatable")->capture_default_str();
  bench_cmd->add_option("--runs", bench_args.runs)->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed)->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out, "CSV file (default stdout)");

  DemoArgs demo_args;
  CLI::App* demo_cmd = app.add_subcommand("demo", "illustrative encrypted image filtering");
  demo_cmd->require_subcommand(1);
  CLI::App* encrypt2d = demo_cmd->add_subcommand("encrypt2d", "filter an 8-bit PGM under encryption");
  encrypt2d->add_option("--config", demo_args.config);
  encrypt2d->add_option("--image", demo_args.image);
  encrypt2d->add_option("--kernel", demo_args.kernel)->capture_default_str();
  encrypt2d->add_option("--seed", demo_args.seed)->capture_default_str();
  encrypt2d->add_option("--out", demo_args.out, "result residues mod t as PGM");
  encrypt2d->add_option("--report", demo_args.report, "also write the report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*params_cmd) {
      ApplyConfig(params_cmd, params_args.c.config);
      return CmdParams(params_args, alpha_opt->count() > 0, out);
    }
    if (*sample_cmd) {
      ApplyConfig(sample_cmd, sample_args.c.config);
      return CmdSample(sample_args, out);
    }
    if (*test_cmd) {
      ApplyConfig(test_cmd, test_config);
      return CmdTest(test_args, out);
    }
    if (*reduce_cmd) {
      ApplyConfig(reduce_cmd, reduce_args.c.config);
      return CmdReduce(reduce_args, out);
    }
    if (*bench_cmd) {
      ApplyConfig(bench_cmd, bench_args.config);
      return CmdBench(bench_args, out);
    }
    ApplyConfig(encrypt2d, demo_args.config);
    return CmdDemo(demo_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    // Bad config values rejected by option validators.
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const PgmError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace mrlwe::cli
