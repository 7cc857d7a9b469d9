// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "batchmp/errors.hpp"
#include "commands.hpp"

namespace batchmp::cli {
namespace {

void add_common(CLI::App& sub, JobSpec& spec, std::string& flavor, std::string& backend) {
  sub.add_option("--size", spec.size_bits, "Operand or modulus size in bits")
      ->each([&spec](const std::string&) { spec.size_given = true; });
  sub.add_option("--flavor", flavor, "Multiplication flavor")
      ->check(CLI::IsMember({"schoolbook", "karatsuba"}));
  sub.add_flag("--truncated", spec.truncated, "Use the truncated Montgomery reduction");
  sub.add_option("--lanes", spec.lanes, "Lanes per batch (8 or 4)");
  sub.add_option("--window", spec.window, "Exponentiation window width, 1 to 5");
  sub.add_option("--seed", spec.seed, "Seed of the mt19937_64 generator");
  sub.add_option("--backend", backend, "Lane engine: auto, portable or ifma")
      ->check(CLI::IsMember({"auto", "portable", "ifma"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  JobSpec spec;
  std::string flavor = "schoolbook";
  std::string backend = "auto";

  CLI::App app{"Batch radix-2^52 multi-precision arithmetic: verification, audits and benchmarks",
               "batchmp-cli"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand("verify", "Differential checks against the reference arithmetic");
  add_common(*verify, spec, flavor, backend);
  verify->add_option("--trials", spec.trials, "Number of random batches")->capture_default_str();

  CLI::App* counts = app.add_subcommand("counts", "Lane-operation counts against their formulas");
  add_common(*counts, spec, flavor, backend);

  CLI::App* ct = app.add_subcommand("ct-check", "Compare exponentiation traces for extreme exponents");
  add_common(*ct, spec, flavor, backend);
  ct->add_option("--exp-bits", spec.exponent_bits, "Common exponent length (default: the size)");
  ct->add_flag("--negative-control", spec.negative_control,
               "Use the leaky schedule, which must fail the check");

  CLI::App* exp = app.add_subcommand("exp", "Batch modular exponentiation of base:exp:mod records");
  add_common(*exp, spec, flavor, backend);
  exp->add_option("--input", spec.input_path, "Input file, or - for standard input")->required();
  exp->add_option("--output", spec.output_path, "Output file (default: standard output)");
  exp->add_flag("--cross-check", spec.cross_check, "Re-verify every result with the reference");

  CLI::App* bench = app.add_subcommand("bench", "Timing of mul, square, mont or exp");
  add_common(*bench, spec, flavor, backend);
  bench->add_option("--op", spec.bench_op, "Operation to time")
      ->check(CLI::IsMember({"mul", "square", "mont", "exp"}));
  std::uint64_t bench_runs = 10;
  bench->add_option("--trials", bench_runs, "Timed runs per data set")->capture_default_str();
  bench->add_option("--datasets", spec.datasets, "Number of data sets")->capture_default_str();
  bench->add_option("--warmup", spec.warmup, "Untimed runs per data set")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    spec.flavor = parse_flavor(flavor);
    spec.backend = backend == "portable" ? BackendChoice::portable
                   : backend == "ifma"   ? BackendChoice::ifma
                                         : BackendChoice::automatic;
    if (*verify) {
      spec.command = "verify";
      return cmd_verify(spec, out);
    }
    if (*counts) {
      spec.command = "counts";
      return cmd_counts(spec, out);
    }
    if (*ct) {
      spec.command = "ct-check";
      return cmd_ct_check(spec, out);
    }
    if (*exp) {
      spec.command = "exp";
      return cmd_exp(spec, out, err);
    }
    spec.command = "bench";
    spec.trials = bench_runs;
    return cmd_bench(spec, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace batchmp::cli
