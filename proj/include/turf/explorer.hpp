//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/dse.hpp"
#include "turf/error.hpp"
#include "turf/model_ir.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace turf {

/// R_acc and R_perf. The performance bound is either a GOPS floor or a
/// latency ceiling; both compare against the same design.
struct Requirements {
  enum class Performance { MinGops, MaxLatencyMs };

  double min_accuracy = 0.0;
  Performance performance = Performance::MinGops;
  double performance_bound = 0.0;

  /// Throws UnsupportedConfig unless min_accuracy is in [0, 1] and the
  /// bound is non-negative.
  void validate() const;
  bool accuracy_met(double accuracy) const { return accuracy >= min_accuracy; }
  bool performance_met(double gops, double latency_ms) const;
};

/// Acc(m): accuracy after fine-tuning `model` for `budget` steps.
class AccuracyOracle {
 public:
  virtual ~AccuracyOracle() = default;
  virtual double accuracy(const ModelSpec& model, int budget) = 0;
  virtual std::string name() const = 0;
  /// True when the numbers are synthetic rather than measured.
  virtual bool synthetic() const { return false; }
};

/// Deterministic stand-in for fine-tuning. Each replaced position costs
/// accuracy, more the closer it is to the input; replacing the top
/// position earns a bonus, which produces the one-replacement peak.
struct SyntheticOracleParams {
  double base_accuracy = 0.90;
  /// Cost of replacing the top and the bottom position; linear in between.
  double top_penalty = 0.004;
  double bottom_penalty = 0.030;
  double top_bonus = 0.010;
  /// Half-width of the seeded perturbation; kept below half the smallest
  /// penalty so accuracy stays monotone in replacements.
  double jitter = 0.001;
  uint64_t seed = 0;
};

class SyntheticOracle : public AccuracyOracle {
 public:
  explicit SyntheticOracle(SyntheticOracleParams params = {});
  double accuracy(const ModelSpec& model, int budget) override;
  std::string name() const override { return "synthetic"; }
  bool synthetic() const override { return true; }
  const SyntheticOracleParams& params() const { return params_; }

 private:
  SyntheticOracleParams params_;
};

/// Replays measured accuracies from a CSV with a header row holding
/// `replacement` (one O or S per position, bottom to top) or `replaced`
/// (count of top positions replaced), and `accuracy`.
class TableOracle : public AccuracyOracle {
 public:
  static TableOracle from_csv(const std::filesystem::path& path);
  static TableOracle from_string(std::string_view csv, std::string source = "inline");

  double accuracy(const ModelSpec& model, int budget) override;
  std::string name() const override { return "table:" + source_; }

 private:
  std::string source_;
  std::map<std::string, double> by_pattern_;
  std::map<size_t, double> by_count_;
};

/// Runs `command <model.json> <budget>` and reads one accuracy from its
/// standard output.
class ExternalOracle : public AccuracyOracle {
 public:
  explicit ExternalOracle(std::string command);
  double accuracy(const ModelSpec& model, int budget) override;
  std::string name() const override { return "external:" + command_; }

 private:
  std::string command_;
};

/// Replacement vector as text, one O (origin) or S (separable) per
/// position, bottom to top.
std::string replacement_pattern(const ModelSpec& model);

/// ModelGen: with no current model returns `pretrained`; otherwise replaces
/// the next position from the top. Returns nullopt (Done) once every
/// position is replaced. Throws InvalidReplacement if `current` was not
/// produced by this top-down sequence.
std::optional<ModelSpec> model_gen(const ModelSpec& pretrained, const ModelSpec* current,
                                   std::optional<double> feedback = std::nullopt);

struct CandidateRecord {
  size_t step = 0;
  std::string pattern;
  size_t replaced = 0;
  double accuracy = 0.0;
  bool accuracy_ok = false;
  bool evaluated = false;
  ModelDesign design;
  /// p: pretrained ops / latency.
  double performance_gops = 0.0;
  /// The candidate's own ops / latency.
  double throughput_gops = 0.0;
  double latency_ms = 0.0;
  bool performance_ok = false;
  bool improved_best = false;
};

struct ExploreOptions {
  int budget = 1;
  /// Evaluate every candidate instead of stopping at the first accuracy
  /// failure; only candidates meeting R_acc can become the best.
  bool exhaustive = false;
};

struct ExploreResult {
  std::string oracle;
  bool synthetic_accuracy = false;
  std::vector<CandidateRecord> log;
  size_t best = 0;
  std::optional<ModelSpec> best_model;
  double best_performance = 0.0;

  const CandidateRecord& best_record() const { return log.at(best); }
};

/// Thrown when no candidate meets both requirements; carries the log.
class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, ExploreResult partial)
      : Error(ErrorKind::NoSolution, what), partial_(std::move(partial)) {}
  const ExploreResult& partial() const { return partial_; }

 private:
  ExploreResult partial_;
};

/// The greedy model/hardware search: while the model is valid and meets
/// R_acc, generate a design, score it and keep it when p >= R_perf and
/// p > p*; then ask ModelGen for the next model.
ExploreResult run_framework(const std::string& dataset, const Requirements& req,
                            DesignGenerator& designer, const ModelSpec& pretrained,
                            AccuracyOracle& oracle, const ExploreOptions& options = {});

}  // namespace turf
