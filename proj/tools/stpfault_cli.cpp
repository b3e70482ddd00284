// stpfault command-line front end. Talks to the library only through the C API.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stpfault/stpfault.h"

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kParse = 4, kDimension = 5, kPrecondition = 6, kInternal = 7 };

int exit_for(sf_status s) {
  switch (s) {
    case SF_OK: return kOk;
    case SF_ERR_ARGUMENT: return kUsage;
    case SF_ERR_IO: return kIo;
    case SF_ERR_PARSE: return kParse;
    case SF_ERR_DIMENSION:
    case SF_ERR_UNSUPPORTED: return kDimension;
    case SF_ERR_PRECONDITION: return kPrecondition;
    case SF_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t number(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad position '" + s + "'");
  return std::stoul(s);
}

/// "3" or "delta4^3" -> 3. The dimension is checked by the library.
std::size_t position(std::string s) {
  if (s.rfind("delta", 0) == 0) {
    const auto caret = s.find('^');
    if (caret == std::string::npos) throw UsageError("expected deltaN^i, got '" + s + "'");
    s = s.substr(caret + 1);
  }
  return number(s);
}

/// "1,3", "{1,3}", "delta4{1,3}" -> {1,3}; "all" -> {} (the library default).
std::vector<std::size_t> positions(std::string s) {
  std::vector<std::size_t> out;
  if (s == "all") return out;
  if (s.rfind("delta", 0) == 0) {
    const auto brace = s.find('{');
    if (brace == std::string::npos) throw UsageError("expected deltaN{...}, got '" + s + "'");
    s = s.substr(brace);
  }
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw UsageError("unterminated set '" + s + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    auto item = s.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(position(item));
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("empty set; use 'all' for the whole space");
  return out;
}

int fail(sf_status s) {
  std::cerr << "stpfault: " << sf_status_name(s) << " error: " << sf_last_error() << "\n";
  return exit_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault detection and intervention analysis for Boolean networks"};
  app.require_subcommand(1);

  std::string network, matrix, args, input, fault, drug, state, inputs, faults, sites, sequence, compare;
  std::vector<std::string> pins;
  std::size_t k = 0;
  std::string format;
  if (const char* env = std::getenv("STPFAULT_FORMAT")) format = env;
  if (format.empty()) format = "text";

  const std::vector<std::pair<std::string, std::string>> commands{
      {"assemble", "Assemble a network into its structure matrices"},
      {"detect", "Detectable faults for an input, detecting inputs for a fault"},
      {"unique", "Inputs that uniquely identify a fault"},
      {"coverage", "Fault coverage and common faults of a test input set"},
      {"testset", "Inputs detecting at least one hazardous fault"},
      {"equivalence", "Detectable, undetectable and equivalent faults"},
      {"reporters", "Greedy reporter selection to expose undetectable faults"},
      {"drugs", "Drug vectors restoring the healthy output under a fault"},
      {"improve-control", "Search a site for one more drug"},
      {"attractors", "Attractor cycles of a pinned transition"},
      {"bcn-detect", "Fault detection by attractor comparison"},
      {"bcn-control", "Control existence of a drug over inputs or a sequence"},
      {"step", "One update of a network (or its output for a Boolean map)"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* net = sub->add_option("--network", network, "Network file (.bn)");
    auto* mat = sub->add_option("--matrix", matrix, "Matrix file (.delta)");
    net->excludes(mat);
    sub->add_option("--args", args, "Argument names of the matrix columns, e.g. F:9,U:4,D:4");
    sub->add_option("--pin", pins, "Fix a matrix argument, e.g. D=4 (repeatable)");
    sub->add_option("--input", input, "Input vector position");
    sub->add_option("--inputs", inputs, "Input set, e.g. 1,3 or delta4{1,3}");
    sub->add_option("--fault", fault, "Fault vector position");
    sub->add_option("--faults", faults, "Fault set");
    sub->add_option("--drug", drug, "Drug vector position");
    sub->add_option("--state", state, "State vector position");
    sub->add_option("--sites", sites, "Comma-separated candidate nodes or outputs");
    sub->add_option("--sequence", sequence, "Input sequence, e.g. 2,1,2");
    sub->add_option("--compare", compare, "Matrix file to compare against");
    sub->add_option("--k", k, "Power for a single trace comparison");
    sub->add_option("--format", format, "Report format (default from STPFAULT_FORMAT)")
        ->check(CLI::IsMember({"text", "json"}));
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  if (format != "text" && format != "json") {
    std::cerr << "stpfault: unknown format '" << format << "'\n";
    return kUsage;
  }
  if (network.empty() == matrix.empty()) {
    std::cerr << "stpfault: give exactly one of --network or --matrix\n";
    return kUsage;
  }

  sf_query q;
  sf_query_init(&q);
  std::vector<std::size_t> in_set, fault_set, seq;
  try {
    if (!inputs.empty()) in_set = positions(inputs);
    if (!faults.empty()) fault_set = positions(faults);
    if (!sequence.empty()) seq = positions(sequence);
    if (!input.empty()) q.input = position(input);
    if (!fault.empty()) q.fault = position(fault);
    if (!drug.empty()) q.drug = position(drug);
    if (!state.empty()) q.state = position(state);
  } catch (const UsageError& e) {
    std::cerr << "stpfault: " << e.what() << "\n";
    return kUsage;
  }
  q.inputs = in_set.data();
  q.n_inputs = in_set.size();
  q.faults = fault_set.data();
  q.n_faults = fault_set.size();
  q.sequence = seq.data();
  q.n_sequence = seq.size();
  q.k = k;
  if (!sites.empty()) q.sites = sites.c_str();
  if (!compare.empty()) q.compare = compare.c_str();

  sf_system* sys = nullptr;
  sf_status st = network.empty() ? sf_system_load_matrix(matrix.c_str(), &sys) : sf_system_load_network(network.c_str(), &sys);
  if (st != SF_OK) return fail(st);
  if (!args.empty() && (st = sf_system_set_args(sys, args.c_str())) != SF_OK) {
    sf_system_free(sys);
    return fail(st);
  }
  for (const auto& p : pins) {
    const auto eq = p.find('=');
    std::size_t pos = 0;
    try {
      if (eq == std::string::npos) throw UsageError("--pin expects NAME=POSITION, got '" + p + "'");
      pos = position(p.substr(eq + 1));
    } catch (const UsageError& e) {
      std::cerr << "stpfault: " << e.what() << "\n";
      sf_system_free(sys);
      return kUsage;
    }
    if ((st = sf_system_pin(sys, p.substr(0, eq).c_str(), pos)) != SF_OK) {
      sf_system_free(sys);
      return fail(st);
    }
  }

  sf_report* rep = nullptr;
  st = sf_run(sys, chosen.c_str(), &q, &rep);
  if (st != SF_OK) {
    sf_system_free(sys);
    return fail(st);
  }
  const char* text = sf_report_render(rep, format == "json" ? SF_FORMAT_JSON : SF_FORMAT_TEXT);
  if (text) std::cout << text;
  sf_report_free(rep);
  sf_system_free(sys);
  return text ? kOk : kInternal;
}
