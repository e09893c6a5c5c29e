#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skewdirac/continuous.hpp"
#include "skewdirac/inverse_discrete.hpp"
#include "skewdirac/io.hpp"
#include "skewdirac/random.hpp"
#include "skewdirac/weyl_discrete.hpp"

namespace skewdirac::cli {

namespace {

// Human-readable statement of the condition behind each error code.
std::string_view condition_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidBeta:
      return "beta(k) beta(k)* = I_p, det beta_1(0) != 0, det beta(k-1) beta(k)* != 0";
    case ErrorCode::InvalidSystem:
      return "C_k = C_k* = C_k^{-1} with p eigenvalues at +1 and p at -1";
    case ErrorCode::NotAWeylFunction:
      return "S solving A S - S A* = i Pi Pi* is invertible";
    case ErrorCode::IllConditioned:
    case ErrorCode::SingularSchurComplement:
      return "recovered rows are coisometric and nondegenerate to working accuracy";
    case ErrorCode::NotPositive:
      return "the operator S is positive definite";
    case ErrorCode::HalfPlaneViolation:
      return "Im lambda < -M";
    case ErrorCode::StepSizeTooCoarse:
      return "step times (|lambda| + M) stays below the integrator ceiling";
    case ErrorCode::TruncationBudgetExceeded:
      return "tail of the truncated Fourier integral within tolerance";
    case ErrorCode::WrongBlockSize:
      return "potential recovery requires p = 1";
    default:
      return "input format";
  }
}

void report_error(std::ostream& err, std::string_view name, const std::string& message,
                  std::string_view condition, int exit_code) {
  io::JsonWriter w;
  w.begin_object()
      .key("error").value(std::string(name))
      .key("message").value(message)
      .key("condition").value(std::string(condition))
      .key("exit_code").value(exit_code)
      .end_object();
  err << w.str();
}

int report(std::ostream& err, const Error& e) {
  const int code = exit_code_for(e.code());
  report_error(err, to_string(e.code()), e.what(), condition_for(e.code()), code);
  return code;
}

// Writes to config.out when set, else to the out stream.
void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out.empty()) {
    out << text;
  } else {
    io::write_file(config.out, text);
  }
}

double max_c_deviation(const DiscreteDiracSystem& a, const DiscreteDiracSystem& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (Index k = 0; k < a.size(); ++k) worst = std::max(worst, max_norm(a[k] - b[k]));
  return worst;
}

// Relative to max(1, largest entry of b): Taylor data are not bounded.
double max_alpha_deviation(const WeylTaylorData& a, const WeylTaylorData& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  double scale = 1.0;
  for (Index k = 0; k < a.size(); ++k) {
    worst = std::max(worst, max_norm(a[k] - b[k]));
    scale = std::max(scale, max_norm(b[k]));
  }
  return worst / scale;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return report(err, e);
  } catch (const std::exception& e) {
    report_error(err, "Internal", e.what(), "", kValidationFailure);
    return kValidationFailure;
  }
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotAWeylFunction:
      return kNotAWeylFunction;
    case ErrorCode::IllConditioned:
    case ErrorCode::SingularSchurComplement:
    case ErrorCode::NumericBreakdown:
    case ErrorCode::NotPositive:
    case ErrorCode::SingularDenominator:
    case ErrorCode::ResolventSingular:
      return kIllConditioned;
    case ErrorCode::TruncationBudgetExceeded:
    case ErrorCode::StepSizeTooCoarse:
      return kQuadratureBudget;
    default:
      return kValidationFailure;
  }
}

void require_valid(const RunConfig& c) {
  const bool positive = c.tol > 0 && c.positivity > 0 && c.admissibility > 0 && c.eta_offset > 0 &&
                        c.xi > 0 && c.tail_tol > 0;
  if (!positive) fail(ErrorCode::Validation, "tolerances and continuous parameters must be positive");
  if (c.grid < 16) fail(ErrorCode::Validation, "grid must have at least 16 intervals");
}

int cmd_forward_discrete(const std::string& input, const RunConfig& config, Streams io) {
  return guarded(io.err, [&] {
    require_valid(config);
    const io::SystemInput parsed = io::parse_system_input(io::read_file(input));
    BetaSequence beta;
    if (const auto* b = std::get_if<BetaSequence>(&parsed)) {
      require_valid(*b);
      beta = *b;
    } else {
      beta = beta_from_system(std::get<DiscreteDiracSystem>(parsed));
    }
    emit(config, io.out, io::to_json(taylor_from_system(beta)));
    return int(kOk);
  });
}

int cmd_inverse_discrete(const std::string& input, const std::string& diagnostics,
                         const RunConfig& config, Streams io) {
  return guarded(io.err, [&] {
    require_valid(config);
    const WeylTaylorData alpha = io::parse_taylor(io::read_file(input));
    InverseOptions options;
    options.invertibility = config.admissibility;
    const InverseResult result = solve_inverse(alpha, options);
    const double alpha_residual = max_alpha_deviation(taylor_from_system(result.beta), alpha);

    const InverseDiagnostics& d = result.diagnostics;
    io::JsonWriter w;
    w.begin_object()
        .key("kind").value("inverse_diagnostics")
        .key("p").value(static_cast<long long>(alpha.p))
        .key("n").value(static_cast<long long>(alpha.n()))
        .key("verdict").value(d.marginal ? "Marginal" : "Weyl")
        .key("margin").value(d.margin)
        .key("s_min_eigenvalue").value(d.min_eigenvalue)
        .key("s_max_eigenvalue").value(d.max_eigenvalue)
        .key("displacement_residual").value(d.displacement_residual)
        .key("alpha_residual").value(alpha_residual)
        .key("coisometry_defect").value(d.coisometry_defect)
        .key("condition_numbers").value(d.condition_numbers)
        .end_object();

    emit(config, io.out, io::to_json(result.system));
    std::string target = diagnostics;
    if (target.empty() && !config.out.empty()) target = config.out + ".diagnostics.json";
    if (target.empty()) {
      io.err << w.str();
    } else {
      io::write_file(target, w.str());
    }
    return int(kOk);
  });
}

int cmd_roundtrip(const RoundtripOptions& options, const RunConfig& config, Streams io) {
  return guarded(io.err, [&] {
    require_valid(config);
    if (options.trials < 1) fail(ErrorCode::Validation, "trials must be positive");
    if (options.n < 0 || options.p < 1) fail(ErrorCode::Validation, "need n >= 0 and p >= 1");
    if ((options.n + 1) * options.p > 64) fail(ErrorCode::Validation, "(n+1)p must not exceed 64");
    if (!(options.margin > 0)) fail(ErrorCode::Validation, "margin must be positive");

    Rng rng(config.seed);
    std::ostringstream csv;
    csv << "trial,n,p,max_c_deviation,max_alpha_deviation,status\n";
    bool any_failed = false;
    for (long long t = 0; t < options.trials; ++t) {
      const BetaSequence beta = random_beta_sequence(rng, options.n, options.p, options.margin);
      const DiscreteDiracSystem truth = system_from_beta(beta);
      WeylTaylorData alpha = taylor_from_system(beta);
      if (options.corrupt && t == 0) alpha.alpha.back()(0, 0) += 1e-3;

      double dc = INFINITY;
      double da = INFINITY;
      std::string status;
      try {
        InverseOptions inv;
        inv.invertibility = config.admissibility;
        const InverseResult result = solve_inverse(alpha, inv);
        dc = max_c_deviation(result.system, truth);
        da = max_alpha_deviation(taylor_from_system(result.beta), alpha);
        status = dc <= config.tol && da <= config.tol ? "ok" : "fail";
      } catch (const Error& e) {
        status = std::string(to_string(e.code()));
      }
      if (status != "ok") any_failed = true;
      csv << t << ',' << options.n << ',' << options.p << ',' << io::format_double(dc) << ','
          << io::format_double(da) << ',' << status << '\n';
    }
    emit(config, io.out, csv.str());
    return int(any_failed ? kRoundtripFailure : kOk);
  });
}

int cmd_admissible(const std::string& input, const RunConfig& config, Streams io) {
  return guarded(io.err, [&] {
    require_valid(config);
    const WeylTaylorData alpha = io::parse_taylor(io::read_file(input));
    const Classification c = classify_admissible(alpha, config.admissibility);
    emit(config, io.out,
         std::string(to_string(c.verdict)) + " margin=" + io::format_double(c.margin) + "\n");
    return int(c.accepted() ? kOk : kNotAWeylFunction);
  });
}

int cmd_continuous(const ContinuousOptions& options, const RunConfig& config, Streams io) {
  return guarded(io.err, [&] {
    require_valid(config);
    if (options.potential.empty() == options.phi_samples.empty()) {
      fail(ErrorCode::Validation, "exactly one of --potential and --phi-samples is required");
    }

    std::optional<PotentialGrid> truth;
    PhiSamples samples;
    double l = options.length;
    if (!options.potential.empty()) {
      const PotentialGrid pot = io::parse_potential(io::read_file(options.potential));
      require_valid(pot);
      l = pot.l;
      truth = pot;
      FourierOptions fo;
      fo.eta = 2.0 * pot.bound + config.eta_offset;
      fo.xi_max = config.xi;
      fo.tail_tolerance = config.tail_tol;
      const PhiSampler phi = [&pot](Complex lambda) { return weyl_continuous(pot, lambda); };
      samples = sample_phi(phi, pot.p, pot.bound, pot.l, fo);
    } else {
      if (!(l > 0)) fail(ErrorCode::Validation, "--length must be positive");
      samples = io::parse_phi_samples(io::read_file(options.phi_samples));
    }
    if (!options.truth.empty()) {
      truth = io::parse_potential(io::read_file(options.truth));
      require_valid(*truth);
    }
    if (!options.dump_samples.empty()) io::write_file(options.dump_samples, io::to_json(samples));

    const SKernelGrid kernel = recover_s(samples, l, config.grid, config.tail_tol);
    const Matrix s_op = build_S_operator(kernel, config.positivity);

    std::ostringstream csv;
    std::optional<double> error;
    if (samples.p == 1) {
      const PotentialGrid v = recover_potential_p1(recover_chi(kernel, s_op));
      io::write_grid_csv(csv, l, v.v, "v");
      if (truth) {
        if (truth->p != 1) fail(ErrorCode::DimensionMismatch, "ground truth must have p = 1");
        const PotentialGrid& t = *truth;
        const PotentialGrid resampled =
            make_potential(1, l, config.grid, [&t](double x) { return t.at(x); });
        error = relative_l2_error(v, resampled);
      }
    } else {
      io.err << "warning: potential recovery is implemented for p = 1 only; writing beta*beta\n";
      io::write_grid_csv(csv, l, recover_beta_gram(kernel, s_op), "betagram");
    }
    emit(config, io.out, csv.str());

    if (error || !options.report.empty()) {
      io::JsonWriter w;
      w.begin_object()
          .key("kind").value("continuous_report")
          .key("p").value(static_cast<long long>(samples.p))
          .key("l").value(l)
          .key("N").value(config.grid)
          .key("eta").value(samples.eta)
          .key("xi").value(config.xi)
          .key("tail_estimate").value(kernel.tail_estimate)
          .key("relative_l2_error");
      if (error) {
        w.value(*error);
      } else {
        w.null();
      }
      w.end_object();
      if (options.report.empty()) {
        io.err << w.str();
      } else {
        io::write_file(options.report, w.str());
      }
    }
    return int(kOk);
  });
}

int run(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Forward and inverse spectral problems for skew-self-adjoint Dirac systems",
               "skewdirac"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  app.add_option("--tol", config.tol, "Round-trip deviation bound")->capture_default_str();
  app.add_option("--positivity", config.positivity, "Cholesky pivot threshold")->capture_default_str();
  app.add_option("--admissibility", config.admissibility,
                 "Smallest accepted sigma_min(S)/||S||")
      ->capture_default_str();
  app.add_option("--grid", config.grid, "Grid intervals N for the continuous pipeline")
      ->capture_default_str();
  app.add_option("--eta-offset", config.eta_offset, "Damping eta = 2M + offset")->capture_default_str();
  app.add_option("--xi", config.xi, "Truncation of the Fourier integral")->capture_default_str();
  app.add_option("--tail-tol", config.tail_tol, "Largest acceptable tail estimate")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for randomized suites")->capture_default_str();
  app.add_option("--out", config.out, "Primary output file (default: stdout)");

  std::string input;
  std::string diagnostics;
  RoundtripOptions rt;
  ContinuousOptions co;

  auto* forward = app.add_subcommand("forward-discrete", "Taylor data of the Weyl function of a system");
  forward->add_option("input", input, "beta or system JSON")->required();

  auto* inverse = app.add_subcommand("inverse-discrete", "Recover a system from Taylor data");
  inverse->add_option("input", input, "taylor JSON")->required();
  inverse->add_option("--diagnostics", diagnostics, "Diagnostics JSON path");

  auto* roundtrip = app.add_subcommand("roundtrip", "Forward then inverse on random systems");
  roundtrip->add_option("--trials", rt.trials)->capture_default_str();
  roundtrip->add_option("--n", rt.n)->capture_default_str();
  roundtrip->add_option("--p", rt.p)->capture_default_str();
  roundtrip->add_option("--margin", rt.margin, "Rejection margin of the generator")
      ->capture_default_str();
  roundtrip->add_flag("--corrupt", rt.corrupt, "Perturb the first trial's Taylor data");

  auto* admissible = app.add_subcommand("admissible", "Classify Taylor data as Weyl data");
  admissible->add_option("input", input, "taylor JSON")->required();

  auto* continuous = app.add_subcommand("continuous", "Recover a continuous potential");
  continuous->add_option("--potential", co.potential, "potential JSON (forward problem solved first)");
  continuous->add_option("--phi-samples", co.phi_samples, "phi_samples JSON");
  continuous->add_option("--length", co.length, "Interval length for --phi-samples")
      ->capture_default_str();
  continuous->add_option("--truth", co.truth, "Ground-truth potential JSON");
  continuous->add_option("--report", co.report, "Error report JSON path (default: stderr)");
  continuous->add_option("--dump-samples", co.dump_samples, "Write the phi samples used");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kUsage;
  }

  if (forward->parsed()) return cmd_forward_discrete(input, config, io);
  if (inverse->parsed()) return cmd_inverse_discrete(input, diagnostics, config, io);
  if (roundtrip->parsed()) return cmd_roundtrip(rt, config, io);
  if (admissible->parsed()) return cmd_admissible(input, config, io);
  return cmd_continuous(co, config, io);
}

}  // namespace skewdirac::cli
