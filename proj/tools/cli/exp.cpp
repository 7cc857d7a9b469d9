// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "report.hpp"

namespace batchmp::cli {
namespace {

namespace o = oracle;

struct Record {
  std::size_t line = 0;
  Words base;
  Words exponent;
  Words modulus;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Record> read_records(std::istream& in) {
  std::vector<Record> records;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line) + ": expected base:exponent:modulus");
    }
    Record r;
    r.line = line;
    try {
      r.base = parse_hex(text.substr(0, c1));
      r.exponent = parse_hex(text.substr(c1 + 1, c2 - c1 - 1));
      r.modulus = parse_hex(text.substr(c2 + 1));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    const o::RefInt m(r.modulus);
    if (!m.is_odd() || m == o::RefInt(1)) {
      throw InvalidModulusError("line " + std::to_string(line) + ": modulus must be odd and greater than 1");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ParseError("input holds no records");
  return records;
}

std::size_t pick_size(const JobSpec& spec, const std::vector<Record>& records) {
  std::size_t widest = 0;
  for (const Record& r : records) widest = std::max(widest, bit_length(r.modulus));
  if (spec.size_given) {
    if (widest > spec.size_bits) {
      throw SizeError("a modulus has " + std::to_string(widest) + " bits, more than --size " +
                      std::to_string(spec.size_bits));
    }
    return spec.size_bits;
  }
  for (std::size_t s : kModulusSizes) {
    if (widest <= s) return s;
  }
  throw SizeError("a modulus has " + std::to_string(widest) + " bits; the largest supported size is 4096");
}

template <std::size_t L>
std::vector<Words> run_batches(const JobSpec& spec, std::size_t size, const std::vector<Record>& records) {
  ExpConfig cfg;
  cfg.window = spec.window.value_or(0);
  std::vector<Words> results;
  for (std::size_t first = 0; first < records.size(); first += L) {
    std::vector<Words> bases, exps, moduli;
    for (std::size_t k = 0; k < L; ++k) {
      // Short final batches repeat their last record.
      const Record& r = records[std::min(first + k, records.size() - 1)];
      moduli.push_back(r.modulus);
      bases.push_back(o::ref_mod(o::RefInt(r.base), o::RefInt(r.modulus)).words());
      exps.push_back(r.exponent);
    }
    const MontgomeryContext<L> ctx = context_new<L>(moduli, size, spec.flavor, spec.truncated);
    std::vector<Words> out = fixed_window_exp<L>(bases, exps, ctx, cfg);
    for (std::size_t k = 0; k < L && first + k < records.size(); ++k) results.push_back(std::move(out[k]));
  }
  return results;
}

}  // namespace

int cmd_exp(const JobSpec& spec, std::ostream& out, std::ostream& diag) {
  validate(spec);
  const Backend backend = resolve_backend(spec.backend);
  ScopedBackend use(backend);

  std::vector<Record> records;
  if (spec.input_path == "-") {
    records = read_records(std::cin);
  } else {
    std::ifstream in(spec.input_path);
    if (!in) throw ConfigError("cannot open input file '" + spec.input_path + "'");
    records = read_records(in);
  }
  const std::size_t size = pick_size(spec, records);
  JobSpec sized = spec;
  sized.size_bits = size;
  validate(sized);

  const std::vector<Words> results = with_lanes(
      spec.lanes, [&](auto lanes) { return run_batches<decltype(lanes)::value>(spec, size, records); });

  std::ofstream file;
  if (!spec.output_path.empty()) {
    file.open(spec.output_path);
    if (!file) throw ConfigError("cannot open output file '" + spec.output_path + "'");
  }
  std::ostream& sink = spec.output_path.empty() ? out : file;
  for (const Words& r : results) sink << to_hex(r, size) << "\n";
  sink.flush();

  if (!spec.cross_check) return kExitPass;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    const o::RefInt want = o::ref_modexp(o::RefInt(r.base), o::RefInt(r.exponent), o::RefInt(r.modulus));
    if (o::RefInt(results[i]) != want) {
      if (bad == 0) {
        diag << "cross-check: mismatch on line " << r.line << ": expected " << want.to_hex() << ", got "
             << o::RefInt(results[i]).to_hex() << "\n";
      }
      ++bad;
    }
  }
  diag << "cross-check: " << (bad == 0 ? "PASS" : "FAIL") << " (" << records.size() - bad << "/"
       << records.size() << " records match the reference)\n";
  return bad == 0 ? kExitPass : kExitCheckFailed;
}

int cmd_exp(const JobSpec& spec, std::ostream& out) { return cmd_exp(spec, out, out); }

}  // namespace batchmp::cli
