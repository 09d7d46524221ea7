#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adba/dataset.hpp"
#include "adba/distribution.hpp"
#include "adba/search.hpp"

namespace adba {

enum class Method { kAdba, kAdbaMd, kAdbaCcm, kExactBaseline };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

enum class AggregateOver { kSuccesses, kAll };

std::string_view to_string(AggregateOver over);
AggregateOver parse_aggregate_over(std::string_view text);

/// Creates one fresh oracle (with its own ledger) per attacked image.
using OracleFactory = std::function<std::unique_ptr<Oracle>(std::uint64_t budget)>;

/// Parses "builtin:<name>[:<arg>]" or "remote:<host:port>" into a factory for
/// a model of the given shape. Built-ins:
///   builtin:mean-threshold[:t]   label 1 iff mean > t (default 0.5); K must be 2
///   builtin:linear[:seed]        random linear model, see toys::random_linear_model
OracleFactory make_oracle_factory(std::string_view spec, std::size_t dimension,
                                  std::uint32_t class_count);

struct ExperimentConfig {
  Method method = Method::kAdba;
  double epsilon = 0.05;
  std::uint64_t budget = 10000;
  double tau = 0.002;
  RhoParams rho = RhoParams::reference();
  int max_probe_loops = 64;
  std::string oracle = "builtin:linear";
  std::filesystem::path images;
  std::uint64_t seed = 0;
  unsigned parallelism = 1;
  std::filesystem::path out = "results";
  AggregateOver aggregate_over = AggregateOver::kSuccesses;
  bool count_verification_query = false;

  /// Attack settings for one image; the per-image seed is seed + index.
  AttackConfig attack_config(std::uint64_t image_index) const;
  void validate() const;
};

/// Reads a JSON config; keys mirror the CLI flag names.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

struct ImageRecord {
  std::size_t index = 0;
  AttackStatus status = AttackStatus::kBudgetExhausted;
  bool success = false;
  std::uint64_t queries = 0;
  std::uint64_t init_queries = 0;
  std::uint64_t iterations = 0;
  std::uint64_t bisections = 0;
  double r_final = 1.0;
  std::uint64_t seed = 0;
  /// Sum of per-iteration query increments taken from the attack trace.
  std::uint64_t trace_queries = 0;

  bool attacked() const noexcept { return status != AttackStatus::kAlreadyMisclassified; }
};

struct CurvePoint {
  std::uint64_t threshold = 0;
  double success_fraction = 0.0;
};

enum class ExperimentStatus { kCompleted, kNoEligibleImages };

std::string_view to_string(ExperimentStatus status);

struct AggregateReport {
  ExperimentStatus status = ExperimentStatus::kCompleted;
  Method method = Method::kAdba;
  AggregateOver aggregate_over = AggregateOver::kSuccesses;
  std::uint64_t budget = 0;
  std::size_t n_total = 0;   // records in the dataset
  std::size_t n_images = 0;  // correctly classified, attacked
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_queries = 0.0;
  double median_queries = 0.0;
  double mean_iterations = 0.0;
  /// Total comparison queries over total iterations of the aggregated images.
  double mean_queries_per_iteration = 0.0;
  std::vector<ImageRecord> records;
  std::vector<CurvePoint> curve;
};

class EmptyDataset : public std::runtime_error {
 public:
  EmptyDataset() : std::runtime_error("dataset contains no images") {}
};

double median(std::vector<double> values);

/// Thresholds 100, 200, ... up to budget (budget itself always included).
std::vector<std::uint64_t> curve_thresholds(std::uint64_t budget);

/// Recomputes every aggregate field from report.records.
void aggregate(AggregateReport& report);

/// Attacks every correctly classified record. Records keep dataset order
/// regardless of parallelism. The log, when given, receives one line per
/// verification query.
AggregateReport run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                               const OracleFactory& factory, std::ostream* log = nullptr);

/// Loads config.images and builds the oracle from config.oracle.
AggregateReport run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

std::string record_to_json_line(const ImageRecord& record);
std::string summary_to_json(const AggregateReport& report);
std::string curve_table(const AggregateReport& report);

/// Writes results.jsonl, summary.json and curve.tsv under dir.
void emit_reports(const AggregateReport& report, const std::filesystem::path& dir);

}  // namespace adba
