#include "sbc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sbc/batch.hpp"
#include "sbc/dsl.hpp"
#include "sbc/equivalence.hpp"
#include "sbc/export.hpp"
#include "sbc/semantics.hpp"
#include "sbc/sim.hpp"

namespace sbc {

namespace {

bool color_enabled() {
  const char* v = std::getenv("SBC_COLOR");
  return v && std::string(v) == "1";
}

void print_diagnostic(std::ostream& err, const std::string& path, const Diagnostic& d) {
  bool color = color_enabled();
  bool is_error = d.severity == Severity::Error;
  std::string sev = is_error ? "error" : "warning";
  if (color) sev = (is_error ? "\033[1;31m" : "\033[1;33m") + sev + "\033[0m";
  err << path;
  if (d.loc.known()) err << ":" << d.loc.line << ":" << d.loc.column;
  err << ": " << sev << ": " << d.message << " [" << d.rule << "]\n";
}

std::string plural(std::size_t n, const std::string& word, const std::string& many) {
  return std::to_string(n) + " " + (n == 1 ? word : many);
}

struct Loaded {
  SourceModel source;
  Model model;
};

// Parses and validates; on failure prints diagnostics and sets `code`.
std::optional<Loaded> load(const std::string& path, std::ostream& err, int& code, bool require_valid = true) {
  std::optional<SourceModel> src;
  try {
    src = SourceModel::load(path);
  } catch (const SbcError& e) {
    err << "sbc: " << e.what() << "\n";
    code = kExitUsage;
    return std::nullopt;
  }
  ParseResult parsed = parse_model(src->text());
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) print_diagnostic(err, path, d);
    code = kExitUsage;
    return std::nullopt;
  }
  if (require_valid) {
    auto diags = validate_model(parsed.model);
    if (has_errors(diags)) {
      for (const auto& d : diags) print_diagnostic(err, path, d);
      code = kExitFailure;
      return std::nullopt;
    }
  }
  return Loaded{std::move(*src), std::move(parsed.model)};
}

std::optional<Scenario> load_scenario(const std::string& path, const Model& model, std::ostream& err, int& code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "sbc: cannot open '" << path << "'\n";
    code = kExitUsage;
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  Scenario sc;
  try {
    sc = parse_scenario(ss.str());
  } catch (const ParseError& e) {
    print_diagnostic(err, path, {e.loc(), Severity::Error, "syntax", e.what()});
    code = kExitUsage;
    return std::nullopt;
  }
  auto diags = validate_scenario(sc, model);
  if (has_errors(diags)) {
    for (const auto& d : diags) print_diagnostic(err, path, d);
    code = kExitUsage;
    return std::nullopt;
  }
  return sc;
}

void require_name(const Model& m, const std::string& name) {
  if (!m.find_definition(name) && !m.find_itg(name)) {
    throw ReferenceError("no definition or itg named '" + name + "'");
  }
}

int emit(const std::string& text, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    err << "sbc: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }
  f << text;
  return kExitOk;
}

std::string render(const Itg& g, const Model& model, const std::string& format) {
  if (format == "dot") return export_dot(g);
  if (format == "json") return export_json(g, &model);
  return print_itg(g);
}

struct Options {
  std::string file;
  std::string def;
  std::string left;
  std::string right;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string seeds;
  std::size_t max_steps = 1000;
  std::size_t max_states = 100000;
  std::string format;
  std::string out;
  std::string choices;
  bool lenient = false;
};

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto loaded = load(o.file, err, code, false);
  if (!loaded) return code;
  auto diags = validate_model(loaded->model);
  for (const auto& d : diags) print_diagnostic(err, o.file, d);
  if (has_errors(diags)) {
    std::size_t errors = 0;
    for (const auto& d : diags) errors += d.severity == Severity::Error;
    out << plural(errors, "error", "errors") << "\n";
    return kExitFailure;
  }
  const Model& m = loaded->model;
  out << plural(m.itgs.size(), "ITG", "ITGs") << ", " << plural(m.definitions.size(), "definition", "definitions")
      << ", OK\n";
  return kExitOk;
}

Itg graph_for(const Model& m, const std::string& name, std::size_t max_states, bool expand_definitions) {
  require_name(m, name);
  if (const Itg* g = m.find_itg(name); g && !m.find_definition(name)) {
    if (!expand_definitions) return *g;
  }
  return expand(m, name, ExpandOptions{max_states});
}

int cmd_expand(const Options& o, std::ostream& out, std::ostream& err, bool is_export) {
  int code = kExitOk;
  auto loaded = load(o.file, err, code);
  if (!loaded) return code;
  Itg g = graph_for(loaded->model, o.def, o.max_states, !is_export);
  std::string format = o.format.empty() ? (is_export ? "json" : "text") : o.format;
  return emit(render(g, loaded->model, format), o.out, out, err);
}

Lts operand(const Model& m, const std::string& selector, std::size_t max_states) {
  static const std::string kExpand = "expand:";
  if (selector.rfind(kExpand, 0) == 0) {
    std::string name = selector.substr(kExpand.size());
    require_name(m, name);
    return lts_from_itg(expand(m, name, ExpandOptions{max_states}));
  }
  require_name(m, selector);
  return lts_from_expr(m, resolve_refs(m, selector), max_states);
}

int cmd_equiv(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto loaded = load(o.file, err, code);
  if (!loaded) return code;
  Lts a = operand(loaded->model, o.left, o.max_states);
  Lts b = operand(loaded->model, o.right, o.max_states);
  BisimResult r = bisimilar(a, b);
  if (r.equivalent) {
    out << "bisimilar\n";
    return kExitOk;
  }
  out << "not bisimilar\n";
  std::string trace;
  for (const auto& l : r.witness) trace += (trace.empty() ? "" : " ") + l;
  out << "witness: " << (trace.empty() ? "(empty trace)" : trace) << "\n";
  out << r.explanation << "\n";
  return kExitFailure;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto loaded = load(o.file, err, code);
  if (!loaded) return code;
  const Model& m = loaded->model;
  require_name(m, o.def);
  std::optional<Scenario> sc;
  if (!o.scenario.empty()) {
    sc = load_scenario(o.scenario, m, err, code);
    if (!sc) return code;
  }
  const Scenario* scp = sc ? &*sc : nullptr;
  SimOptions opts{o.lenient};

  if (!o.seeds.empty()) {
    SeedRange range = parse_seed_range(o.seeds);
    auto runs = simulate_batch(m, o.def, scp, range, o.max_steps, opts);
    std::size_t errors = 0;
    std::map<std::string, std::size_t> by_status;
    std::string text;
    for (const auto& r : runs) {
      text += format_summary(r) + "\n";
      if (r.error) ++errors;
      else ++by_status[std::string(to_string(r.status))];
    }
    text += "# " + plural(runs.size(), "run", "runs");
    for (const auto& [status, n] : by_status) text += ", " + std::to_string(n) + " " + status;
    if (errors) text += ", " + std::to_string(errors) + " error";
    text += "\n";
    int rc = emit(text, o.out, out, err);
    return rc != kExitOk ? rc : (errors ? kExitFailure : kExitOk);
  }

  Trace t = simulate(m, o.def, scp, o.seed, o.max_steps, opts);
  return emit(format_trace(t), o.out, out, err);
}

int cmd_step(const Options& o, std::ostream& out, std::ostream& err, std::istream& in) {
  int code = kExitOk;
  auto loaded = load(o.file, err, code);
  if (!loaded) return code;
  const Model& m = loaded->model;
  require_name(m, o.def);
  std::optional<Scenario> sc;
  if (!o.scenario.empty()) {
    sc = load_scenario(o.scenario, m, err, code);
    if (!sc) return code;
  }
  const Scenario* scp = sc ? &*sc : nullptr;
  SimOptions opts{o.lenient};

  std::optional<std::vector<std::size_t>> scripted;
  if (!o.choices.empty()) {
    scripted.emplace();
    std::stringstream ss(o.choices);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        scripted->push_back(std::stoul(item));
      } catch (const std::exception&) {
        err << "sbc: malformed choice '" << item << "'\n";
        return kExitUsage;
      }
    }
  }
  std::size_t next_choice = 0;

  SimState state = start_state(m, o.def);
  std::size_t fired = 0;
  out << "# env: " << to_string(state.config.env) << "\n";
  while (true) {
    auto candidates = enabled(state, m, scp);
    out << "state: " << state.config.node->display() << "\n";
    if (candidates.empty()) {
      out << "# " << (state.config.node->all_inactive() ? "inactive" : "deadlock") << ": no enabled transitions\n";
      return kExitOk;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out << "  [" << i << "] " << Label::of(candidates[i].prefix).render() << "\n";
    }
    std::size_t choice = 0;
    if (scripted) {
      if (next_choice == scripted->size()) return kExitOk;
      choice = (*scripted)[next_choice++];
    } else {
      out << "> " << std::flush;
      std::string line;
      if (!std::getline(in, line) || line == "q" || line == "quit") return kExitOk;
      try {
        choice = std::stoul(line);
      } catch (const std::exception&) {
        err << "sbc: enter a candidate number or 'q'\n";
        continue;
      }
    }
    try {
      auto [next, step] = step_interactive(state, choice, m, scp, opts);
      step.index = ++fired;
      out << format_step(step) << "\n";
      state = std::move(next);
    } catch (const SimulationError& e) {
      err << "sbc: " << e.what() << "\n";
      if (scripted) return kExitFailure;
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Structure-behavior coalescence process algebra toolkit"};
  app.name("sbc");
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  check->add_option("file", o.file, "Model file (.sbc)")->required();

  auto add_def = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Model file (.sbc)")->required();
    sub->add_option("--def", o.def, "Definition or itg name")->required();
  };
  auto add_stubs = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file (.scn)");
    sub->add_flag("--lenient-stubs", o.lenient, "Use type defaults for missing out-parameter values");
  };

  auto* expand_cmd = app.add_subcommand("expand", "Expand a definition into an explicit graph");
  add_def(expand_cmd);
  expand_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "dot", "json"}));
  expand_cmd->add_option("--out", o.out, "Write to file instead of stdout");
  expand_cmd->add_option("--max-states", o.max_states, "State-space bound");

  auto* export_cmd = app.add_subcommand("export", "Export a graph as DOT or JSON");
  add_def(export_cmd);
  export_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--out", o.out, "Write to file instead of stdout");
  export_cmd->add_option("--max-states", o.max_states, "State-space bound");

  auto* equiv = app.add_subcommand("equiv", "Strong bisimulation check");
  equiv->add_option("file", o.file, "Model file (.sbc)")->required();
  equiv->add_option("--left", o.left, "Operand: NAME (on the fly) or expand:NAME")->required();
  equiv->add_option("--right", o.right, "Operand: NAME (on the fly) or expand:NAME")->required();
  equiv->add_option("--max-states", o.max_states, "State-space bound");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a seeded random simulation");
  add_def(simulate_cmd);
  add_stubs(simulate_cmd);
  auto* seed_opt = simulate_cmd->add_option("--seed", o.seed, "Random seed");
  simulate_cmd->add_option("--seeds", o.seeds, "Batch mode over seeds N..M")->excludes(seed_opt);
  simulate_cmd->add_option("--max-steps", o.max_steps, "Firing bound");
  simulate_cmd->add_option("--out", o.out, "Write to file instead of stdout");

  auto* step_cmd = app.add_subcommand("step", "Step through a definition interactively");
  add_def(step_cmd);
  add_stubs(step_cmd);
  step_cmd->add_option("--choices", o.choices, "Comma-separated candidate numbers instead of stdin");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("sbc");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, out, err);
    if (expand_cmd->parsed()) return cmd_expand(o, out, err, false);
    if (export_cmd->parsed()) return cmd_expand(o, out, err, true);
    if (equiv->parsed()) return cmd_equiv(o, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out, err);
    if (step_cmd->parsed()) return cmd_step(o, out, err, in);
  } catch (const ReferenceError& e) {
    err << "sbc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SbcError& e) {
    err << "sbc: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sbc
