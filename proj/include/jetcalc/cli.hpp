#pragma once

// Command-line front end over JSON stdin/stdout or files.
//
// Subcommands:
//   jet     compute a jet of a DSL map at the origin
//   apply   apply lambda / ell / flip / prolong to a JSON jet payload
//   verify  run the randomized property suite
//
// Exit codes: 0 success, 1 failed law, 2 DSL parse error, 3 domain error,
// 4 payload type/shape mismatch, 5 unknown law, 64 usage error. Every error
// path emits a structured JSON object on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetcalc/canon.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/expr.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/json_io.hpp"
#include "jetcalc/props.hpp"

namespace jetcalc {

namespace cli_detail {

inline void write_output(const json& value, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << value.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error("io", "cannot open output file: " + out_path);
  f << value.dump(2) << "\n";
}

inline json read_payload(const std::string& in_path, std::istream& in) {
  std::string text;
  if (in_path.empty()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(in_path);
    if (!f) throw Error("io", "cannot open input file: " + in_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ShapeError(std::string("payload is not valid JSON: ") + e.what());
  }
}

inline int emit_error(std::ostream& err, int code, const std::string& kind,
                      const std::string& message, json extra = json::object()) {
  extra["kind"] = kind;
  extra["message"] = message;
  err << json{{"error", extra}}.dump(2) << "\n";
  return code;
}

struct JetArgs {
  std::string order;
  int p = 0;
  int m = 0;
  int k = 0;
  std::string map_source;
  std::string fiber_source;
};

inline json cmd_jet(const JetArgs& a) {
  if (!a.fiber_source.empty()) {
    if (a.order != "1")
      throw Error("usage", "--fiber-map is only meaningful with --order 1");
    if (a.k < 1) throw Error("usage", "--fiber-map needs --k");
    SmoothMap base = parse(a.map_source, a.p, a.m);
    SmoothMap fiber = parse(a.fiber_source, a.p, a.k);
    return to_json(vbjet_of(base, fiber));
  }
  if (a.order == "1") return to_json(jet1_of(parse(a.map_source, a.p, a.m)));
  if (a.order == "2") return to_json(jet2_of(parse(a.map_source, 2 * a.p, a.m)));
  if (a.order == "double")
    return to_json(doublejet_of(parse(a.map_source, 2 * a.p, a.m)));
  throw Error("usage", "--order must be 1, 2, or double");
}

inline json cmd_apply(const std::string& op, const std::string& with_source,
                      const json& payload) {
  if (op == "prolong") {
    if (with_source.empty()) throw Error("usage", "--op prolong needs --with <map>");
    switch (payload_type(payload)) {
      case PayloadType::Jet1: {
        Jet1 j = jet1_from_json(payload);
        return to_json(prolong1(parse(with_source, j.m), j));
      }
      case PayloadType::Jet2: {
        Jet2 j = jet2_from_json(payload);
        return to_json(prolong2(parse(with_source, j.m), j));
      }
      case PayloadType::DoubleJet: {
        DoubleJet v = doublejet_from_json(payload);
        return to_json(prolong_double(parse(with_source, v.m), v));
      }
      case PayloadType::VBJet:
        throw ShapeError("prolong does not apply to VBJet payloads");
    }
    throw ShapeError("unrecognized payload");
  }
  if (!with_source.empty()) throw Error("usage", "--with is only meaningful with --op prolong");
  if (op == "lambda") {
    if (payload_type(payload) != PayloadType::Jet2)
      throw ShapeError("lambda expects a Jet2 payload");
    return to_json(lambda(jet2_from_json(payload)));
  }
  if (op == "flip") {
    if (payload_type(payload) != PayloadType::Jet2)
      throw ShapeError("flip expects a Jet2 payload");
    return to_json(flip_jet2(jet2_from_json(payload)));
  }
  if (op == "ell") {
    if (payload_type(payload) != PayloadType::DoubleJet)
      throw ShapeError("ell expects a DoubleJet payload");
    return to_json(ell(doublejet_from_json(payload)));
  }
  throw Error("usage", "--op must be lambda, ell, flip, or prolong");
}

}  // namespace cli_detail

// Runs one CLI invocation. `args` has no program name; streams stand in for
// stdin/stdout/stderr so the driver is testable in-process.
inline int run_cli(const std::vector<std::string>& args, std::istream& in,
                   std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-jet calculus over a smooth-map DSL"};
  app.name("jetcalc");
  app.require_subcommand(1);

  cli_detail::JetArgs jet_args;
  std::string jet_out;
  CLI::App* jet_cmd = app.add_subcommand("jet", "Compute a jet of a DSL map at the origin");
  jet_cmd->add_option("--order", jet_args.order, "Jet order: 1, 2, or double")->required();
  jet_cmd->add_option("--p", jet_args.p, "Source dimension p")->required()
      ->check(CLI::PositiveNumber);
  jet_cmd->add_option("--m", jet_args.m, "Target dimension m")->required()
      ->check(CLI::PositiveNumber);
  jet_cmd->add_option("--k", jet_args.k, "Fiber dimension k (with --fiber-map)");
  jet_cmd->add_option("--map", jet_args.map_source, "Map source in the DSL")->required();
  jet_cmd->add_option("--fiber-map", jet_args.fiber_source,
                      "Fiber map source (builds a VBJet, --order 1 only)");
  jet_cmd->add_option("--out", jet_out, "Output file (default stdout)");

  std::string apply_op, apply_with, apply_in, apply_out;
  CLI::App* apply_cmd = app.add_subcommand("apply", "Apply an operation to a JSON jet payload");
  apply_cmd->add_option("--op", apply_op, "Operation: lambda, ell, flip, or prolong")
      ->required();
  apply_cmd->add_option("--with", apply_with, "DSL source of the chart map h (prolong only)");
  apply_cmd->add_option("--in", apply_in, "Input file (default stdin)");
  apply_cmd->add_option("--out", apply_out, "Output file (default stdout)");

  std::uint64_t verify_seed = 0;
  bool seed_given = false;
  int verify_trials = 100;
  std::string verify_laws, verify_out;
  double tol_exact = 1e-12, tol_fd = 1e-6;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the randomized property suite");
  verify_cmd->add_option("--seed", verify_seed, "Generator seed (overrides JETCALC_SEED)");
  verify_cmd->add_option("--trials", verify_trials, "Trials per law")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--laws", verify_laws, "Comma-separated law filter");
  verify_cmd->add_option("--tol-exact", tol_exact, "Tolerance for exact-path laws");
  verify_cmd->add_option("--tol-fd", tol_fd, "Tolerance for the finite-difference cross-check");
  verify_cmd->add_option("--out", verify_out, "Output file (default stdout)");

  std::vector<const char*> argv;
  argv.push_back("jetcalc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    seed_given = verify_cmd->count("--seed") > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    int code = app.exit(e, msg, msg);
    (void)code;
    return cli_detail::emit_error(err, 64, "usage", msg.str());
  }

  try {
    if (jet_cmd->parsed()) {
      cli_detail::write_output(cli_detail::cmd_jet(jet_args), jet_out, out);
      return 0;
    }
    if (apply_cmd->parsed()) {
      json payload = cli_detail::read_payload(apply_in, in);
      cli_detail::write_output(cli_detail::cmd_apply(apply_op, apply_with, payload),
                               apply_out, out);
      return 0;
    }
    if (verify_cmd->parsed()) {
      SuiteConfig config;
      config.trials = verify_trials;
      config.tol_exact = tol_exact;
      config.tol_fd = tol_fd;
      if (seed_given) {
        config.seed = verify_seed;
      } else if (const char* env = std::getenv("JETCALC_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
          throw Error("usage", std::string("JETCALC_SEED is not an integer: ") + env);
        config.seed = v;
      }
      std::vector<std::string> filter;
      if (!verify_laws.empty()) {
        std::stringstream ss(verify_laws);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) filter.push_back(item);
      }
      std::vector<LawReport> reports = run_suite(config, filter);
      cli_detail::write_output(to_json(reports), verify_out, out);
      for (const auto& r : reports)
        if (!r.pass) return 1;
      return 0;
    }
  } catch (const ParseError& e) {
    return cli_detail::emit_error(err, 2, "parse", e.what(),
                                  json{{"position", e.position}, {"expected", e.expected}});
  } catch (const DomainError& e) {
    return cli_detail::emit_error(err, 3, "domain", e.what(),
                                  json{{"component", e.component}, {"operator", e.op}});
  } catch (const UnknownLawError& e) {
    return cli_detail::emit_error(err, 5, "unknown_law", e.what(), json{{"law", e.law}});
  } catch (const AnchorError& e) {
    return cli_detail::emit_error(err, 4, "anchor", e.what());
  } catch (const ShapeError& e) {
    return cli_detail::emit_error(err, 4, "shape", e.what());
  } catch (const Error& e) {
    return cli_detail::emit_error(err, e.kind() == "usage" ? 64 : 4, e.kind(), e.what());
  }
  return cli_detail::emit_error(err, 64, "usage", "no subcommand given");
}

}  // namespace jetcalc
