// kstab — exact analyzer for the limiting energy slope of hypersurfaces
// degenerating under diagonal one-parameter groups, with a weight-space
// destabilizer search and an exact polyhedral certifier.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kstab/certify.hpp"
#include "kstab/envelope.hpp"
#include "kstab/errors.hpp"
#include "kstab/parse.hpp"
#include "kstab/rational.hpp"
#include "kstab/search.hpp"
#include "kstab/stability.hpp"
#include "kstab/support.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;          // parse / validation failures
constexpr int kExitDimension = 3;      // dimension, trace, or variable-index errors
constexpr int kExitBudget = 4;         // combinatorial budget exceeded
constexpr int kExitNotInvariant = 5;   // futaki on a non-invariant direction
constexpr int kExitViolation = 10;     // success family: a violating direction exists

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

struct LoadedInput {
  kstab::Support support;
  std::string digest;
  std::vector<std::string> warnings;
};

LoadedInput load_input(const std::string& path) {
  std::string bytes;
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    bytes = buffer.str();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw kstab::ParseError("cannot open input file '" + path + "'", 0);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    bytes = buffer.str();
  }

  LoadedInput input;
  input.digest = hex64(fnv1a64(bytes));
  const bool is_json = path != "-" && path.size() >= 5 &&
                       path.compare(path.size() - 5, 5, ".json") == 0;
  input.support = is_json ? kstab::parse_support_json(bytes) : kstab::parse_polynomial(bytes);
  input.warnings = kstab::validate_support(input.support).warnings;
  return input;
}

kstab::WeightVector parse_lambda(const std::string& text, unsigned n) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream stream(text);
  while (std::getline(stream, piece, ',')) parts.push_back(piece);
  kstab::WeightVector lambda;
  for (const std::string& part : parts) lambda.push_back(kstab::parse_rational(part));
  if (lambda.size() != n + 1) {
    throw kstab::DimensionError("--lambda has " + std::to_string(lambda.size()) +
                                " entries; the support needs " + std::to_string(n + 1));
  }
  return lambda;
}

json rational_array(const std::vector<kstab::Rational>& values) {
  json arr = json::array();
  for (const kstab::Rational& value : values) arr.push_back(kstab::to_string(value));
  return arr;
}

json float_array(const std::vector<kstab::Rational>& values) {
  json arr = json::array();
  for (const kstab::Rational& value : values) arr.push_back(kstab::to_double(value));
  return arr;
}

struct OutputOptions {
  bool as_json = false;
  bool with_float = false;
};

void emit(const std::string& command, const LoadedInput& input, const json& payload,
          const OutputOptions& opts, const std::vector<std::string>& lines) {
  if (opts.as_json) {
    json envelope;
    envelope["schema_version"] = "1";
    envelope["command"] = command;
    envelope["input_digest"] = input.digest;
    envelope["payload"] = payload;
    envelope["warnings"] = input.warnings;
    std::cout << envelope.dump(2) << "\n";
  } else {
    for (const std::string& warning : input.warnings) {
      std::cout << "warning: " << warning << "\n";
    }
    for (const std::string& line : lines) std::cout << line << "\n";
  }
}

std::string float_suffix(const OutputOptions& opts, const kstab::Rational& value) {
  if (!opts.with_float) return "";
  return "  (~" + std::to_string(kstab::to_double(value)) + ")";
}

json genericity_json(const kstab::StabilityGenericity& g) {
  json out;
  out["generic"] = g.generic();
  out["delta_distinct"] = g.delta_distinct;
  json ties = json::array();
  for (const auto& [a, b] : g.delta_ties) ties.push_back(json::array({a, b}));
  out["delta_ties"] = ties;
  json triples = json::array();
  for (const auto& [var, triple] : g.concurrent_triples) {
    triples.push_back(json{{"var", var}, {"monomials", json::array({triple[0], triple[1], triple[2]})}});
  }
  out["concurrent_triples"] = triples;
  return out;
}

int run_eval(const std::string& path, const std::string& lambda_text,
             const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::WeightVector lambda = parse_lambda(lambda_text, input.support.n);
  const kstab::StabilityReport rep = kstab::report(input.support, lambda);

  json payload;
  payload["n"] = input.support.n;
  payload["d"] = input.support.d;
  payload["lambda"] = rational_array(lambda);
  payload["weights"] = rational_array(rep.weight_data.w);
  payload["lambda_max"] = kstab::to_string(rep.weight_data.lambda_max);
  payload["delta"] = kstab::to_string(rep.weight_data.delta);
  payload["delta_i"] = rational_array(rep.weight_data.delta_i);
  payload["penalties"] = rational_array(rep.penalties);
  payload["energy"] = kstab::to_string(rep.energy);
  payload["limit"] = kstab::to_string(rep.limit);
  payload["energy_reverse"] = kstab::to_string(rep.energy_reverse);
  payload["mainc_inequality_holds"] = rep.mainc_inequality_holds;
  payload["genericity"] = genericity_json(rep.genericity);
  if (rep.invariant) {
    payload["invariant"] = json{{"kappa", kstab::to_string(rep.invariant->kappa)},
                                {"futaki", kstab::to_string(rep.invariant->futaki)}};
  } else {
    payload["invariant"] = nullptr;
  }
  if (opts.with_float) {
    payload["energy_float"] = kstab::to_double(rep.energy);
    payload["limit_float"] = kstab::to_double(rep.limit);
    payload["energy_reverse_float"] = kstab::to_double(rep.energy_reverse);
    payload["penalties_float"] = float_array(rep.penalties);
  }

  std::vector<std::string> lines;
  lines.push_back("energy: " + kstab::to_string(rep.energy) + float_suffix(opts, rep.energy));
  lines.push_back("limit: " + kstab::to_string(rep.limit) + float_suffix(opts, rep.limit));
  lines.push_back("energy_reverse: " + kstab::to_string(rep.energy_reverse) +
                  float_suffix(opts, rep.energy_reverse));
  lines.push_back("lambda_max: " + kstab::to_string(rep.weight_data.lambda_max));
  std::string penalties = "penalties:";
  for (const kstab::Rational& penalty : rep.penalties) {
    penalties += " " + kstab::to_string(penalty);
  }
  lines.push_back(penalties);
  lines.push_back(std::string("generic: ") + (rep.genericity.generic() ? "yes" : "no"));
  lines.push_back(std::string("mainc_inequality_holds: ") +
                  (rep.mainc_inequality_holds ? "yes" : "no"));
  if (rep.invariant) {
    lines.push_back("invariant: kappa " + kstab::to_string(rep.invariant->kappa) +
                    ", futaki " + kstab::to_string(rep.invariant->futaki));
  } else {
    lines.push_back("invariant: no");
  }
  emit("eval", input, payload, opts, lines);
  return kExitOk;
}

int run_envelope(const std::string& path, const std::string& lambda_text, unsigned var,
                 const std::string& csv_path, const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::WeightVector lambda = parse_lambda(lambda_text, input.support.n);
  const std::vector<kstab::Line> lines = kstab::phi_lines(input.support, lambda, var);
  const kstab::Envelope envelope = kstab::build_envelope(lines);

  std::ostringstream csv;
  csv << "segment_start,segment_end,slope,contribution\n";
  json segments = json::array();
  for (const kstab::EnvelopeSegment& seg : envelope.segments) {
    const std::string end = seg.end ? kstab::to_string(*seg.end) : "inf";
    const kstab::Rational contribution =
        seg.end ? (*seg.end - seg.start) * seg.slope * (seg.slope - 1) : kstab::Rational(0);
    csv << kstab::to_string(seg.start) << "," << end << "," << kstab::to_string(seg.slope)
        << "," << kstab::to_string(contribution) << "\n";
    segments.push_back(json{{"start", kstab::to_string(seg.start)},
                            {"end", end},
                            {"slope", kstab::to_string(seg.slope)},
                            {"value_at_start", kstab::to_string(seg.value_at_start)},
                            {"contribution", kstab::to_string(contribution)}});
  }

  if (!csv_path.empty()) {
    std::ofstream file(csv_path, std::ios::binary);
    if (!file) throw kstab::Error("cannot write CSV file '" + csv_path + "'");
    file << csv.str();
  }

  json family = json::array();
  for (const kstab::Line& line : lines) {
    family.push_back(json{{"intercept", kstab::to_string(line.intercept)},
                          {"slope", kstab::to_string(line.slope)}});
  }
  json payload;
  payload["var"] = var;
  payload["lines"] = family;
  payload["segments"] = segments;
  payload["penalty"] = kstab::to_string(kstab::penalty_segment_sum(envelope));
  if (!csv_path.empty()) payload["csv_path"] = csv_path;

  std::string table = csv.str();
  if (!table.empty() && table.back() == '\n') table.pop_back();
  emit("envelope", input, payload, opts, {table});
  return kExitOk;
}

int run_check(const std::string& path, const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::ValidationReport validation = kstab::validate_support(input.support);

  json payload;
  payload["valid"] = true;
  payload["n"] = input.support.n;
  payload["d"] = input.support.d;
  payload["monomial_count"] = input.support.monomials.size();
  payload["fano"] = validation.fano;
  json witnesses = json::array();
  for (const std::size_t j : validation.zero_exponent_witness) witnesses.push_back(j);
  payload["zero_exponent_witness"] = witnesses;

  std::vector<std::string> lines;
  lines.push_back("valid: yes");
  lines.push_back("n: " + std::to_string(input.support.n) +
                  ", d: " + std::to_string(input.support.d) +
                  ", monomials: " + std::to_string(input.support.monomials.size()));
  lines.push_back(std::string("fano: ") + (validation.fano ? "yes (d <= n)" : "no (d > n)"));
  std::string witness_line = "zero-exponent witness per variable:";
  for (const std::size_t j : validation.zero_exponent_witness) {
    witness_line += " " + std::to_string(j);
  }
  lines.push_back(witness_line);
  emit("check", input, payload, opts, lines);
  return kExitOk;
}

json trace_json(const std::vector<kstab::SearchTraceEntry>& trace) {
  json out = json::array();
  for (const kstab::SearchTraceEntry& entry : trace) {
    out.push_back(json{{"lambda", rational_array(entry.lambda)},
                       {"score", kstab::to_string(entry.score)}});
  }
  return out;
}

int run_search(const std::string& path, const kstab::SearchConfig& cfg,
               const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::SearchResult result = kstab::search_min(input.support, cfg);

  json payload;
  payload["height"] = cfg.height;
  payload["samples"] = cfg.samples;
  payload["seed"] = cfg.seed;
  payload["refine_rounds"] = cfg.refine_rounds;
  payload["denominator_cap"] = cfg.denominator_cap;
  payload["best_lambda"] = rational_array(result.best_lambda);
  payload["best_score"] = kstab::to_string(result.best_score);
  payload["evaluations"] = result.evaluations;
  payload["violated"] = result.violated;
  payload["trace"] = trace_json(result.trace);
  if (opts.with_float) payload["best_score_float"] = kstab::to_double(result.best_score);

  std::vector<std::string> lines;
  std::string witness = "best_lambda: (";
  for (std::size_t i = 0; i < result.best_lambda.size(); ++i) {
    if (i > 0) witness += ",";
    witness += kstab::to_string(result.best_lambda[i]);
  }
  witness += ")";
  lines.push_back(witness);
  lines.push_back("best_score: " + kstab::to_string(result.best_score) +
                  float_suffix(opts, result.best_score));
  lines.push_back("evaluations: " + std::to_string(result.evaluations));
  lines.push_back(std::string("violated: ") + (result.violated ? "yes" : "no"));
  emit("search", input, payload, opts, lines);
  return result.violated ? kExitViolation : kExitOk;
}

int run_certify(const std::string& path, std::uint64_t box_limit, unsigned jobs,
                const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::BigInt subsets = kstab::certify_subset_count(input.support);
  if (!opts.as_json) {
    std::cout << "constraint subsets to enumerate: " << subsets.str() << "\n";
  }
  const kstab::Certificate cert = kstab::certify_min(input.support, box_limit, jobs);

  json payload;
  payload["subset_count"] = subsets.str();
  payload["vertex_count"] = cert.vertex_count;
  payload["minimum"] = kstab::to_string(cert.minimum);
  json witness_arr = rational_array(cert.witness);
  payload["witness"] = witness_arr;
  payload["walls_used"] = cert.walls_used;
  payload["violated"] = cert.minimum < 0;
  if (opts.with_float) payload["minimum_float"] = kstab::to_double(cert.minimum);

  std::vector<std::string> lines;
  lines.push_back("minimum: " + kstab::to_string(cert.minimum) +
                  float_suffix(opts, cert.minimum));
  std::string witness = "witness: (";
  for (std::size_t i = 0; i < cert.witness.size(); ++i) {
    if (i > 0) witness += ",";
    witness += kstab::to_string(cert.witness[i]);
  }
  witness += ")";
  lines.push_back(witness);
  lines.push_back("feasible vertices: " + std::to_string(cert.vertex_count));
  std::string walls = "active constraints at witness:";
  for (const std::string& label : cert.walls_used) walls += " [" + label + "]";
  lines.push_back(walls);
  emit("certify", input, payload, opts, lines);
  return cert.minimum < 0 ? kExitViolation : kExitOk;
}

int run_futaki(const std::string& path, const std::string& lambda_text,
               const OutputOptions& opts) {
  const LoadedInput input = load_input(path);
  const kstab::WeightVector lambda = parse_lambda(lambda_text, input.support.n);
  const std::optional<kstab::Rational> kappa = kstab::detect_invariance(input.support, lambda);
  if (!kappa) {
    const kstab::WeightData data = kstab::compute_weights(input.support, lambda);
    std::cerr << "error: not invariant; monomial weights are";
    for (const kstab::Rational& w : data.w) std::cerr << " " << kstab::to_string(w);
    std::cerr << "\n";
    return kExitNotInvariant;
  }
  const kstab::Rational futaki = kstab::futaki_invariant(input.support, lambda);
  const kstab::Rational e = kstab::energy(input.support, lambda);

  json payload;
  payload["lambda"] = rational_array(lambda);
  payload["kappa"] = kstab::to_string(*kappa);
  payload["futaki"] = kstab::to_string(futaki);
  payload["energy"] = kstab::to_string(e);
  payload["matches_energy"] = futaki == e;
  if (opts.with_float) payload["futaki_float"] = kstab::to_double(futaki);

  std::vector<std::string> lines;
  lines.push_back("kappa: " + kstab::to_string(*kappa));
  lines.push_back("futaki: " + kstab::to_string(futaki) + float_suffix(opts, futaki));
  lines.push_back(std::string("matches_energy: ") + (futaki == e ? "yes" : "no"));
  emit("futaki", input, payload, opts, lines);
  return kExitOk;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("KSTAB_JOBS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact limiting-slope analyzer and destabilizer search for "
               "hypersurfaces under diagonal one-parameter degenerations"};
  app.require_subcommand(1);

  OutputOptions opts;
  unsigned jobs = default_jobs();
  app.add_flag("--json", opts.as_json, "emit a machine-readable JSON envelope");
  app.add_flag("--float", opts.with_float,
               "add floating-point approximations alongside exact values");
  app.add_option("--jobs", jobs, "worker threads for search/certify (env KSTAB_JOBS)");

  std::string file;
  std::string lambda_text;
  unsigned var = 0;
  std::string csv_path;
  kstab::SearchConfig cfg;
  std::uint64_t box_limit = 1000000;

  CLI::App* eval = app.add_subcommand("eval", "evaluate the energy and limiting slope at λ");
  eval->add_option("-f,--file", file, "input polynomial (.poly text, .json, or - for stdin)")
      ->required();
  eval->add_option("--lambda", lambda_text, "comma-separated rational weights")->required();

  CLI::App* envelope = app.add_subcommand("envelope", "dump one variable's envelope as CSV");
  envelope->add_option("-f,--file", file, "input polynomial")->required();
  envelope->add_option("--lambda", lambda_text, "comma-separated rational weights")->required();
  envelope->add_option("--var", var, "variable index")->required();
  envelope->add_option("--csv", csv_path, "write the CSV to this path");

  CLI::App* check = app.add_subcommand("check", "validate a support and report Fano status");
  check->add_option("-f,--file", file, "input polynomial")->required();

  CLI::App* search = app.add_subcommand("search", "search weight space for violating directions");
  search->add_option("-f,--file", file, "input polynomial")->required();
  search->add_option("--height", cfg.height, "integer enumeration sup-norm bound");
  search->add_option("--samples", cfg.samples, "random sampled directions");
  search->add_option("--seed", cfg.seed, "sampling seed");
  search->add_option("--refine", cfg.refine_rounds, "pattern-search refinement rounds");
  search->add_option("--denominator-cap", cfg.denominator_cap,
                     "finest refinement step is 1/cap");

  CLI::App* certify = app.add_subcommand("certify", "exact polytope minimum of the energy");
  certify->add_option("-f,--file", file, "input polynomial")->required();
  certify->add_option("--box-limit", box_limit, "constraint-subset budget");

  CLI::App* futaki = app.add_subcommand("futaki", "invariant-case Futaki value");
  futaki->add_option("-f,--file", file, "input polynomial")->required();
  futaki->add_option("--lambda", lambda_text, "comma-separated rational weights")->required();

  // Let the global --json/--float/--jobs flags appear after the subcommand too.
  for (CLI::App* sub : {eval, envelope, check, search, certify, futaki}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    cfg.jobs = jobs;
    if (eval->parsed()) return run_eval(file, lambda_text, opts);
    if (envelope->parsed()) return run_envelope(file, lambda_text, var, csv_path, opts);
    if (check->parsed()) return run_check(file, opts);
    if (search->parsed()) return run_search(file, cfg, opts);
    if (certify->parsed()) return run_certify(file, box_limit, jobs, opts);
    if (futaki->parsed()) return run_futaki(file, lambda_text, opts);
  } catch (const kstab::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const kstab::WeightSumError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const kstab::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const kstab::NotInvariantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotInvariant;
  } catch (const kstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
