// Copyright 2026 The cnnscale Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cnnscale/budget.h"
#include "cnnscale/document.h"
#include "cnnscale/factor_space.h"
#include "cnnscale/model.h"
#include "cnnscale/rational.h"
#include "cnnscale/scaling.h"
#include "cnnscale/solver.h"
#include "cnnscale/synthesis.h"

namespace cnnscale::cli {
namespace {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

NetworkDocument LoadDocument(const CliConfig& config) {
  if (config.input_path.empty()) throw UsageError("--input is required");
  std::string text;
  try {
    text = ReadTextFile(config.input_path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  return Deserialize(text);
}

void Emit(const std::string& path, const std::string& text,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  try {
    WriteTextFile(path, text);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

Rational ParseOption(const std::string& name, const std::string& text) {
  try {
    return ParseRational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(name + ": " + e.what());
  }
}

ScopeSettings ResolveScope(const CliConfig& config,
                           const std::optional<NetworkDocument>& document) {
  ScopeSettings settings;
  std::optional<ScopeSettings> block =
      document ? document->scope : std::nullopt;
  if (config.alpha) {
    settings.scope.alpha = *config.alpha;
  } else if (block) {
    settings.scope.alpha = block->scope.alpha;
  } else if (document) {
    settings.scope.alpha = document->network.classifier_classes;
  } else {
    throw UsageError("--alpha is required without an input document");
  }
  if (config.beta) {
    settings.scope.beta = *config.beta;
  } else if (block) {
    settings.scope.beta = block->scope.beta;
  } else {
    settings.scope.beta = settings.scope.alpha;
  }
  if (config.lambda) {
    settings.scope.lambda = ParseOption("--lambda", *config.lambda);
  } else if (block) {
    settings.scope.lambda = block->scope.lambda;
  }
  if (config.scope_aware) {
    settings.scope_aware = *config.scope_aware;
  } else if (block) {
    settings.scope_aware = block->scope_aware;
  }
  CheckScope(settings.scope);
  return settings;
}

BottleneckPolicy ResolvePolicy(const CliConfig& config) {
  std::optional<BottleneckMode> mode = ParseMode(config.policy);
  if (!mode) throw UsageError("unknown --policy '" + config.policy + "'");
  BottleneckPolicy policy;
  switch (*mode) {
    case BottleneckMode::kAbsoluteRatio:
      policy = BottleneckPolicy::AbsoluteRatio();
      break;
    case BottleneckMode::kBaselineRelative:
      policy = BottleneckPolicy::BaselineRelative();
      break;
    case BottleneckMode::kStrictNondecreasing:
      policy = BottleneckPolicy::StrictNondecreasing();
      break;
  }
  if (config.theta) {
    if (*mode == BottleneckMode::kStrictNondecreasing) {
      throw UsageError("--theta does not apply to strict-nondecreasing");
    }
    policy.theta = ParseOption("--theta", *config.theta);
  }
  CheckPolicy(policy);
  return policy;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

int RunValidate(const CliConfig& config, std::ostream& out,
                std::ostream& err) {
  const NetworkDocument document = LoadDocument(config);
  const std::vector<Finding> findings = Validate(document.network);
  if (config.format == ReportFormat::kDocument) {
    Json j = Json::object();
    j["network"] = document.network.name;
    j["valid"] = findings.empty();
    Json list = Json::array();
    for (const Finding& f : findings) {
      list.push_back({{"location", f.location},
                      {"rule", f.rule},
                      {"message", f.message}});
    }
    j["findings"] = std::move(list);
    Emit(config.output_path, Dump(j), out);
  }
  for (const Finding& f : findings) err << FormatFinding(f) << "\n";
  if (!findings.empty()) return kValidation;
  if (config.format == ReportFormat::kTable) {
    std::ostringstream text;
    text << document.network.name << ": valid, "
         << document.network.macro_layers.size() << " macro-layers, "
         << CountParameters(document.network) << " parameters\n";
    Emit(config.output_path, text.str(), out);
  }
  return kOk;
}

int RunBudget(const CliConfig& config, std::ostream& out) {
  std::optional<NetworkDocument> document;
  std::int64_t phi = 0;
  if (config.phi) {
    phi = *config.phi;
  } else {
    document = LoadDocument(config);
    phi = CountParameters(document->network);
  }
  const ScopeSettings settings = ResolveScope(config, document);
  const BudgetResult budget =
      ComputeBudget({phi, settings.scope, settings.scope_aware,
                     ParseOption("--window-tolerance", config.window_tolerance)});
  if (config.format == ReportFormat::kDocument) {
    Json j = Json::object();
    j["phi"] = phi;
    j["alpha"] = settings.scope.alpha;
    j["beta"] = settings.scope.beta;
    j["lambda"] = FormatExact(settings.scope.lambda);
    j["scope_aware"] = settings.scope_aware;
    j["fraction"] = FormatExact(budget.fraction);
    j["fraction_rounded"] = FormatFixed(budget.fraction, 2);
    j["phi_prime_floor"] = budget.phi_prime_floor;
    j["gamma_ideal"] = FormatExact(budget.gamma_ideal);
    Emit(config.output_path, Dump(j), out);
    return kOk;
  }
  std::ostringstream text;
  text << "phi              " << phi << "\n"
       << "scope            alpha=" << settings.scope.alpha
       << " beta=" << settings.scope.beta
       << " lambda=" << FormatExact(settings.scope.lambda)
       << (settings.scope_aware ? " scope-aware" : "") << "\n"
       << "fraction         " << FormatExact(budget.fraction) << " ("
       << FormatFixed(budget.fraction, 2) << ")\n"
       << "phi_prime_floor  " << budget.phi_prime_floor << "\n"
       << "gamma_ideal      " << FormatExact(budget.gamma_ideal) << "\n";
  Emit(config.output_path, text.str(), out);
  return kOk;
}

int RunCountSpace(const CliConfig& config, std::ostream& out) {
  const NetworkDocument document = LoadDocument(config);
  const Network& network = document.network;
  const std::vector<FactorSet> sets = ComputeFactorSets(network);
  const BigInt affine = CountSolutionSpace(network, true);
  const BigInt non_affine = CountSolutionSpace(network, false);
  if (config.format == ReportFormat::kDocument) {
    Json j = Json::object();
    j["network"] = network.name;
    j["affine"] = affine.str();
    j["non_affine"] = non_affine.str();
    Json list = Json::array();
    for (const FactorSet& set : sets) {
      list.push_back({{"macro_layer", set.macro_layer},
                      {"factors", set.factors}});
    }
    j["factor_sets"] = std::move(list);
    Emit(config.output_path, Dump(j), out);
    return kOk;
  }
  std::ostringstream text;
  text << "affine      " << affine.str() << " =";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    text << (i == 0 ? " " : " x ") << sets[i].factors.size();
  }
  text << "\nnon-affine  " << non_affine.str() << "\n";
  for (const FactorSet& set : sets) {
    text << "  " << set.macro_layer << ":";
    for (std::int64_t f : set.factors) text << " " << f;
    text << "\n";
  }
  Emit(config.output_path, text.str(), out);
  return kOk;
}

int RunEnumerate(const CliConfig& config, std::ostream& out,
                 std::ostream& err) {
  const NetworkDocument document = LoadDocument(config);
  WindowQuery query;
  query.target_fraction = ParseOption(
      "--target-fraction", config.target_fraction.value_or("0.08"));
  query.tolerance = ParseOption("--window-tolerance", config.window_tolerance);
  query.enumeration_cap = config.enumeration_cap;
  query.threads = config.threads;

  std::ofstream plan_file;
  std::ostream* plan_stream = nullptr;
  if (config.emit_plans) {
    if (config.output_path.empty()) {
      plan_stream = &out;
    } else {
      plan_file.open(config.output_path, std::ios::trunc);
      if (!plan_file) {
        throw IoError("cannot write '" + config.output_path + "'");
      }
      plan_stream = &plan_file;
    }
  }
  PlanSink sink;
  if (plan_stream != nullptr) {
    sink = [plan_stream](std::span<const std::int64_t> factors,
                         std::int64_t phi_prime) {
      for (std::size_t i = 0; i < factors.size(); ++i) {
        *plan_stream << (i == 0 ? "" : ",") << factors[i];
      }
      *plan_stream << " " << phi_prime << "\n";
    };
  }
  const WindowCount count = EnumerateWindow(document.network, query, sink);
  if (plan_file.is_open()) {
    plan_file.close();
    if (!plan_file) throw IoError("write failed for '" + config.output_path + "'");
  }

  // The summary shares stdout only when plans are not streamed there.
  std::ostream& summary = plan_stream == &out ? err : out;
  if (config.format == ReportFormat::kDocument) {
    Json j = Json::object();
    j["network"] = document.network.name;
    j["target_fraction"] = FormatExact(query.target_fraction);
    j["tolerance"] = FormatExact(query.tolerance);
    j["matching"] = count.matching;
    j["visited"] = count.visited;
    j["closed_form"] = count.closed_form;
    summary << Dump(j);
  } else {
    summary << "matching  " << count.matching << "\n"
            << "visited   " << count.visited
            << (count.closed_form ? " (closed form)" : "") << "\n";
  }
  return kOk;
}

int RunSynthesize(const CliConfig& config, std::ostream& out,
                  std::ostream& err) {
  const NetworkDocument document = LoadDocument(config);
  const ScopeSettings settings = ResolveScope(config, document);
  SynthesisOptions options;
  options.scope_aware = settings.scope_aware;
  if (config.target_fraction) {
    options.target_fraction =
        ParseOption("--target-fraction", *config.target_fraction);
  }
  options.window_tolerance =
      ParseOption("--window-tolerance", config.window_tolerance);
  options.policy = ResolvePolicy(config);
  std::optional<ObjectiveMode> objective = ParseObjective(config.objective);
  if (!objective) {
    throw UsageError("unknown --objective '" + config.objective + "'");
  }
  options.objective = *objective;
  options.quantization = config.quantization;
  options.enumeration_cap = config.enumeration_cap;
  options.threads = config.threads;

  const SynthesisOutcome outcome =
      Synthesize(document.network, settings.scope, options);
  const std::string report = config.format == ReportFormat::kDocument
                                 ? Dump(ToJson(outcome.report))
                                 : FormatReportTable(outcome.report);
  Emit(config.report_path, report, out);
  if (!outcome.network) {
    err << "no bottleneck-free plan satisfies the budget\n";
    return kInfeasible;
  }
  if (!config.output_path.empty()) {
    Emit(config.output_path, Serialize(*outcome.network), out);
  }
  return kOk;
}

}  // namespace

int Run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kValidate:
        return RunValidate(config, out, err);
      case Command::kBudget:
        return RunBudget(config, out);
      case Command::kCountSpace:
        return RunCountSpace(config, out);
      case Command::kEnumerate:
        return RunEnumerate(config, out, err);
      case Command::kSynthesize:
        return RunSynthesize(config, out, err);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kValidation;
  } catch (const CapExceededError& e) {
    err << "refused: " << e.what() << "\n";
    return kCapRefused;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CliConfig config;
  CLI::App app{"Scale a CNN down to a class-proportional parameter budget",
               "cnnscale"};
  app.require_subcommand(1);

  std::string format = "table";
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("-i,--input", config.input_path, "Network document")
        ->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "table or document")
        ->check(CLI::IsMember({"table", "document"}));
  };
  auto add_scope = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Classes of the baseline");
    sub->add_option("--beta", config.beta, "Classes of interest");
    sub->add_option("--lambda", config.lambda,
                    "Budget share per out-of-scope class (default 0.25)");
    sub->add_flag("--scope-aware{true},--no-scope-aware{false}",
                  config.scope_aware,
                  "Add a miscellaneous class for out-of-scope inputs");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a network");
  add_input(validate);
  validate->add_option("-o,--output", config.output_path, "Output file");
  add_format(validate);

  CLI::App* budget = app.add_subcommand("budget", "Compute a parameter budget");
  budget->add_option("-i,--input", config.input_path, "Network document");
  budget->add_option("--phi", config.phi, "Baseline parameter count");
  budget->add_option("--window-tolerance", config.window_tolerance,
                     "Relative window half-width");
  budget->add_option("-o,--output", config.output_path, "Output file");
  add_scope(budget);
  add_format(budget);

  CLI::App* count =
      app.add_subcommand("count-space", "Count scaling solutions");
  add_input(count);
  count->add_option("-o,--output", config.output_path, "Output file");
  add_format(count);

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Count affine plans inside a budget window");
  add_input(enumerate);
  enumerate->add_option("--target-fraction", config.target_fraction,
                        "Target share of baseline parameters (default 0.08)");
  enumerate->add_option("--window-tolerance", config.window_tolerance,
                        "Relative window half-width (default 0.002)");
  enumerate->add_option("--enumeration-cap", config.enumeration_cap,
                        "Refuse larger spaces");
  enumerate->add_option("--threads", config.threads)->check(CLI::PositiveNumber);
  enumerate->add_flag("--emit-plans", config.emit_plans,
                      "Stream matching plans, one per line");
  enumerate->add_option("-o,--output", config.output_path,
                        "Plan stream file (default stdout)");
  add_format(enumerate);

  CLI::App* synthesize =
      app.add_subcommand("synthesize", "Build the scaled network");
  add_input(synthesize);
  synthesize->add_option("-o,--output", config.output_path,
                         "Scaled network document");
  synthesize->add_option("--report", config.report_path,
                         "Report file (default stdout)");
  add_scope(synthesize);
  synthesize->add_option("--target-fraction", config.target_fraction,
                         "Override the class-derived budget fraction");
  synthesize->add_option("--window-tolerance", config.window_tolerance,
                         "Relative window half-width for --objective window");
  synthesize->add_option("--policy", config.policy,
                         "absolute-ratio, baseline-relative or "
                         "strict-nondecreasing");
  synthesize->add_option("--theta", config.theta, "Bottleneck threshold");
  synthesize->add_option("--objective", config.objective,
                         "cap-maximize or window");
  synthesize->add_option("--quantization", config.quantization,
                         "Approximate with buckets of this many parameters")
      ->check(CLI::NonNegativeNumber);
  synthesize->add_option("--enumeration-cap", config.enumeration_cap);
  synthesize->add_option("--threads", config.threads)
      ->check(CLI::PositiveNumber);
  add_format(synthesize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (validate->parsed()) config.command = Command::kValidate;
  if (budget->parsed()) config.command = Command::kBudget;
  if (count->parsed()) config.command = Command::kCountSpace;
  if (enumerate->parsed()) config.command = Command::kEnumerate;
  if (synthesize->parsed()) config.command = Command::kSynthesize;
  config.format =
      format == "document" ? ReportFormat::kDocument : ReportFormat::kTable;
  return Run(config, out, err);
}

}  // namespace cnnscale::cli
