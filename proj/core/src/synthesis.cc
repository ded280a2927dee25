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

#include "cnnscale/synthesis.h"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cnnscale/factor_space.h"

namespace cnnscale {
namespace {

using Json = nlohmann::ordered_json;

std::string Millions(std::int64_t count) {
  return FormatFixed(Rational(count, 1'000'000), 2);
}

Json OptionalInt(const std::optional<std::int64_t>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

SynthesisOutcome Synthesize(const Network& network, const ClassScope& scope,
                            const SynthesisOptions& options) {
  RequireValid(network);
  CheckScope(scope);
  CheckPolicy(options.policy);
  if (network.classifier_classes != scope.alpha) {
    throw PreconditionError(
        "classifier has " + std::to_string(network.classifier_classes) +
        " classes but the scope declares alpha=" +
        std::to_string(scope.alpha));
  }
  const std::int64_t phi = CountParameters(network);

  BudgetResult budget;
  if (options.target_fraction) {
    const Rational& target = *options.target_fraction;
    if (target <= 0 || target > 1) {
      throw PreconditionError("target fraction must lie in (0, 1], got " +
                              FormatExact(target));
    }
    budget.fraction = target;
    budget.gamma_ideal = IdealGamma(phi, scope.alpha);
    budget.phi_prime_floor = ToInt64(Ceil(target * phi));
  } else {
    budget = ComputeBudget({phi, scope, options.scope_aware,
                            options.window_tolerance});
  }

  SolveRequest request;
  request.network = network;
  request.budget = budget;
  request.policy = options.policy;
  request.objective = options.objective;
  request.window_tolerance = options.window_tolerance;
  request.quantization = options.quantization;
  request.enumeration_cap = options.enumeration_cap;
  request.threads = options.threads;
  const FeasibleRegion region = ComputeFeasibleRegion(request);
  SolveResult solved = SolveDp(request);

  SynthesisOutcome outcome;
  SynthesisReport& report = outcome.report;
  report.network_name = network.name;
  report.scope = scope;
  report.scope_aware = options.scope_aware;
  report.objective = options.objective;
  report.policy = options.policy;
  report.window_tolerance = options.window_tolerance;
  report.phi = phi;
  report.budget = budget;
  report.region = region;
  report.approximate = solved.approximate;
  report.nearest_below = solved.nearest_below;
  report.nearest_above = solved.nearest_above;
  report.flops = CountFlops(network);
  report.affine_solutions = CountSolutionSpace(network, true);
  report.non_affine_solutions = CountSolutionSpace(network, false);
  report.classifier_classes = network.classifier_classes;

  const std::vector<std::int64_t> base_params = CountLayerParameters(network);
  if (!solved.feasible()) {
    for (std::size_t i = 0; i < network.macro_layers.size(); ++i) {
      const MacroLayer& layer = network.macro_layers[i];
      LayerReport row;
      row.name = layer.name;
      row.output_channels = OutputChannels(layer);
      row.channel_sum = ChannelSum(layer);
      row.parameters = base_params[i];
      report.layers.push_back(std::move(row));
    }
    return outcome;
  }

  const ScalePlan& plan = *solved.plan;
  const Network scaled = ApplyPlan(network, plan);
  const std::vector<std::int64_t> scaled_params = CountLayerParameters(scaled);
  for (std::size_t i = 0; i < network.macro_layers.size(); ++i) {
    const MacroLayer& layer = network.macro_layers[i];
    const MacroLayer& after = scaled.macro_layers[i];
    LayerReport row;
    row.name = layer.name;
    row.factor = plan.factors[i];
    row.output_channels = OutputChannels(layer);
    row.scaled_output_channels = OutputChannels(after);
    row.channel_sum = ChannelSum(layer);
    row.scaled_channel_sum = ChannelSum(after);
    row.parameters = base_params[i];
    row.scaled_parameters = scaled_params[i];
    for (const auto& branch : plan.scaled_depths[i]) {
      row.scaled_depths.insert(row.scaled_depths.end(), branch.begin(),
                               branch.end());
    }
    report.layers.push_back(std::move(row));
  }
  report.feasible = true;
  report.phi_prime = plan.phi_prime;
  report.factors = plan.factors;
  report.bottlenecks = CheckBottleneck(network, plan, options.policy);
  report.min_channel_ratio = solved.min_channel_ratio;
  report.scaled_flops = CountFlops(scaled);

  outcome.network = RewriteClassifier(scaled, scope, options.scope_aware);
  report.scaled_classifier_classes = outcome.network->classifier_classes;
  return outcome;
}

nlohmann::ordered_json ToJson(const SynthesisReport& report) {
  Json j = Json::object();
  j["network"] = report.network_name;
  Json scope = Json::object();
  scope["alpha"] = report.scope.alpha;
  scope["beta"] = report.scope.beta;
  scope["lambda"] = FormatExact(report.scope.lambda);
  scope["scope_aware"] = report.scope_aware;
  j["scope"] = std::move(scope);

  Json budget = Json::object();
  budget["phi"] = report.phi;
  budget["fraction"] = FormatExact(report.budget.fraction);
  budget["phi_prime_floor"] = report.budget.phi_prime_floor;
  budget["gamma_ideal"] = FormatExact(report.budget.gamma_ideal);
  j["budget"] = std::move(budget);

  Json solver = Json::object();
  solver["objective"] = std::string(ObjectiveName(report.objective));
  solver["window_tolerance"] = FormatExact(report.window_tolerance);
  solver["accepted_phi_prime"] = {report.region.lower, report.region.upper};
  solver["policy"] = std::string(ModeName(report.policy.mode));
  solver["theta"] = FormatExact(report.policy.theta);
  solver["approximate"] = report.approximate;
  j["solver"] = std::move(solver);

  Json result = Json::object();
  result["feasible"] = report.feasible;
  if (report.feasible) {
    result["phi_prime"] = report.phi_prime;
    result["ratio"] = FormatExact(Rational(report.phi_prime, report.phi));
    result["factors"] = report.factors;
    Json flagged = Json::array();
    for (int i : report.bottlenecks) flagged.push_back(report.layers[i].name);
    result["bottlenecks"] = std::move(flagged);
    result["min_channel_ratio"] =
        report.min_channel_ratio ? Json(FormatExact(*report.min_channel_ratio))
                                 : Json(nullptr);
  } else {
    result["nearest_below"] = OptionalInt(report.nearest_below);
    result["nearest_above"] = OptionalInt(report.nearest_above);
  }
  j["result"] = std::move(result);

  Json layers = Json::array();
  for (const LayerReport& row : report.layers) {
    Json r = Json::object();
    r["name"] = row.name;
    r["channel_sum"] = row.channel_sum;
    r["output_channels"] = row.output_channels;
    r["parameters"] = row.parameters;
    if (report.feasible) {
      r["factor"] = row.factor;
      r["scaled_depths"] = row.scaled_depths;
      r["scaled_channel_sum"] = row.scaled_channel_sum;
      r["scaled_output_channels"] = row.scaled_output_channels;
      r["scaled_parameters"] = row.scaled_parameters;
    }
    layers.push_back(std::move(r));
  }
  j["layers"] = std::move(layers);

  Json flops = Json::object();
  flops["baseline"] = report.flops;
  if (report.feasible) flops["scaled"] = report.scaled_flops;
  j["flops"] = std::move(flops);

  Json space = Json::object();
  space["affine"] = report.affine_solutions.str();
  space["non_affine"] = report.non_affine_solutions.str();
  j["solution_space"] = std::move(space);

  Json classifier = Json::object();
  classifier["baseline"] = report.classifier_classes;
  if (report.feasible) classifier["scaled"] = report.scaled_classifier_classes;
  j["classifier_classes"] = std::move(classifier);
  return j;
}

std::string FormatReportTable(const SynthesisReport& report) {
  std::ostringstream out;
  char line[256];
  out << "network      " << report.network_name << "\n";
  out << "scope        alpha=" << report.scope.alpha
      << " beta=" << report.scope.beta
      << " lambda=" << FormatExact(report.scope.lambda)
      << (report.scope_aware ? " scope-aware" : "") << "\n";
  out << "objective    " << ObjectiveName(report.objective) << ", policy "
      << ModeName(report.policy.mode) << " theta="
      << FormatExact(report.policy.theta) << "\n";
  out << "phi          " << report.phi << " (" << Millions(report.phi)
      << " M)\n";
  out << "budget       fraction " << FormatFixed(report.budget.fraction, 2)
      << " (" << FormatExact(report.budget.fraction) << "), floor "
      << report.budget.phi_prime_floor << ", gamma "
      << FormatFixed(report.budget.gamma_ideal, 2) << "\n";
  out << "accepted     [" << report.region.lower << ", " << report.region.upper
      << "]\n";
  out << "solutions    affine " << report.affine_solutions.str()
      << ", non-affine " << report.non_affine_solutions.str() << "\n";
  if (!report.feasible) {
    out << "result       infeasible";
    if (report.nearest_below) out << "; nearest below " << *report.nearest_below;
    if (report.nearest_above) out << "; nearest above " << *report.nearest_above;
    out << "\n";
    return out.str();
  }
  out << "phi'         " << report.phi_prime << " ("
      << Millions(report.phi_prime) << " M), ratio "
      << FormatFixed(Rational(report.phi_prime, report.phi), 2)
      << (report.approximate ? " [approximate]" : "") << "\n";
  out << "flops        " << report.flops << " -> " << report.scaled_flops
      << "\n";
  out << "classifier   " << report.classifier_classes << " -> "
      << report.scaled_classifier_classes << "\n\n";

  std::snprintf(line, sizeof(line), "%-16s %6s %8s %8s %10s %10s %s\n",
                "layer", "factor", "ofms", "ofms'", "params(M)", "params'(M)",
                "flag");
  out << line;
  for (std::size_t i = 0; i < report.layers.size(); ++i) {
    const LayerReport& row = report.layers[i];
    bool flagged = false;
    for (int b : report.bottlenecks) flagged = flagged || b == static_cast<int>(i);
    std::snprintf(line, sizeof(line), "%-16s %6lld %8lld %8lld %10s %10s %s\n",
                  row.name.c_str(), static_cast<long long>(row.factor),
                  static_cast<long long>(row.output_channels),
                  static_cast<long long>(row.scaled_output_channels),
                  Millions(row.parameters).c_str(),
                  Millions(row.scaled_parameters).c_str(),
                  flagged ? "bottleneck" : "");
    out << line;
  }
  return out.str();
}

}  // namespace cnnscale
