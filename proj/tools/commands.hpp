#pragma once

// Subcommands of the skewdirac tool. Each command reads its inputs from
// files, writes its primary output to `out` (or the --out path) and reports
// failures as one JSON object on `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "skewdirac/error.hpp"

namespace skewdirac::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kRoundtripFailure = 1,
  kValidationFailure = 2,
  kNotAWeylFunction = 3,
  kIllConditioned = 4,
  kQuadratureBudget = 5,
  kUsage = 64,
};

int exit_code_for(ErrorCode code) noexcept;

struct RunConfig {
  /// Round-trip deviation bound.
  double tol = 1e-8;
  /// Cholesky pivot threshold (relative) for the continuous S operator.
  double positivity = 1e-10;
  /// sigma_min(S) / ||S|| below which Taylor data are rejected.
  double admissibility = 1e-10;
  /// Continuous pipeline: grid intervals, eta = 2M + eta_offset, truncation Xi, tail tolerance.
  long long grid = 400;
  double eta_offset = 1.0;
  double xi = 400.0;
  double tail_tol = 1e-2;
  /// Seed for randomized suites.
  std::uint64_t seed = 1;
  /// Primary output path; empty writes to the out stream.
  std::string out;
};

/// Throws Validation unless every tolerance is positive and grid >= 16.
void require_valid(const RunConfig& config);

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Beta or system JSON in, Taylor JSON out.
int cmd_forward_discrete(const std::string& input, const RunConfig& config, Streams io);

/// Taylor JSON in, system JSON out, diagnostics JSON to `diagnostics`
/// (defaults to <out>.diagnostics.json, or to err when writing to a stream).
int cmd_inverse_discrete(const std::string& input, const std::string& diagnostics,
                         const RunConfig& config, Streams io);

struct RoundtripOptions {
  long long trials = 50;
  long long n = 4;
  long long p = 2;
  /// Rejection margin on the nondegeneracy determinants of sampled rows.
  double margin = 0.6;
  /// Perturb the Taylor data of the first trial before inverting.
  bool corrupt = false;
};

/// CSV trial,n,p,max_c_deviation,max_alpha_deviation,status; the alpha column is
/// relative to max(1, largest entry). Exit 1 when any trial deviates by more
/// than config.tol.
int cmd_roundtrip(const RoundtripOptions& options, const RunConfig& config, Streams io);

/// Prints "<verdict> margin=<value>". Exit 3 for NotWeyl.
int cmd_admissible(const std::string& input, const RunConfig& config, Streams io);

struct ContinuousOptions {
  std::string potential;
  std::string phi_samples;
  /// Ground-truth potential for the error report.
  std::string truth;
  /// Error report path; empty prints the report to err.
  std::string report;
  /// Writes the sampled Weyl function as phi_samples JSON.
  std::string dump_samples;
  /// Interval length when reading phi samples.
  double length = 1.0;
};

/// CSV x,re_v,im_v for p = 1; CSV of beta*beta entries for p > 1.
int cmd_continuous(const ContinuousOptions& options, const RunConfig& config, Streams io);

/// Parses argv and dispatches.
int run(int argc, const char* const* argv, Streams io);

}  // namespace skewdirac::cli
