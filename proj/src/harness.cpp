#include "adba/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "adba/baseline.hpp"
#include "adba/remote.hpp"
#include "adba/toys.hpp"

namespace adba {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kAdba: return "adba";
    case Method::kAdbaMd: return "adba-md";
    case Method::kAdbaCcm: return "adba-ccm";
    case Method::kExactBaseline: return "exact-baseline";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::kAdba, Method::kAdbaMd, Method::kAdbaCcm, Method::kExactBaseline}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::string_view to_string(AggregateOver over) {
  return over == AggregateOver::kSuccesses ? "successes" : "all";
}

AggregateOver parse_aggregate_over(std::string_view text) {
  if (text == "successes") return AggregateOver::kSuccesses;
  if (text == "all") return AggregateOver::kAll;
  throw std::invalid_argument("aggregate-over must be 'successes' or 'all'");
}

std::string_view to_string(ExperimentStatus status) {
  return status == ExperimentStatus::kCompleted ? "completed" : "no-eligible-images";
}

OracleFactory make_oracle_factory(std::string_view spec, std::size_t dimension,
                                  std::uint32_t class_count) {
  if (spec.starts_with("remote:")) {
    std::string address(spec.substr(7));
    net::parse_endpoint(address);  // fail early on a malformed address
    return [address, dimension, class_count](std::uint64_t budget) -> std::unique_ptr<Oracle> {
      return std::make_unique<RemoteOracle>(address, dimension, class_count, budget);
    };
  }
  if (!spec.starts_with("builtin:")) {
    throw std::invalid_argument("oracle must be builtin:<name> or remote:<host:port>");
  }
  std::string_view rest = spec.substr(8);
  std::string_view name = rest;
  std::string_view arg;
  if (auto colon = rest.find(':'); colon != std::string_view::npos) {
    name = rest.substr(0, colon);
    arg = rest.substr(colon + 1);
  }
  if (name == "mean-threshold") {
    if (class_count != 2) throw std::invalid_argument("mean-threshold is a two-class model");
    const double threshold = arg.empty() ? 0.5 : parse_number<double>(arg, "threshold");
    return [threshold, dimension](std::uint64_t budget) -> std::unique_ptr<Oracle> {
      return std::make_unique<MeanThresholdOracle>(threshold, dimension, budget);
    };
  }
  if (name == "linear") {
    const auto seed = arg.empty() ? std::uint64_t{0} : parse_number<std::uint64_t>(arg, "seed");
    auto model = std::make_shared<const toys::LinearModel>(
        toys::random_linear_model(seed, dimension, class_count));
    return [model](std::uint64_t budget) -> std::unique_ptr<Oracle> {
      return model->make_oracle(budget);
    };
  }
  throw std::invalid_argument("unknown builtin oracle '" + std::string(name) + "'");
}

AttackConfig ExperimentConfig::attack_config(std::uint64_t image_index) const {
  AttackConfig cfg;
  cfg.epsilon = epsilon;
  cfg.budget = budget;
  cfg.compare.tau = tau;
  cfg.compare.max_probe_loops = max_probe_loops;
  cfg.compare.rho = rho;
  cfg.compare.rule = method == Method::kAdbaMd ? ProbeRule::kMedian : ProbeRule::kMidpoint;
  cfg.ccm = method == Method::kAdbaCcm;
  cfg.seed = seed + image_index;
  cfg.count_verification_query = count_verification_query;
  return cfg;
}

void ExperimentConfig::validate() const {
  attack_config(0).validate();
  if (method == Method::kAdbaMd) rho.validate();
  if (parallelism == 0) throw std::invalid_argument("parallelism must be positive");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  ExperimentConfig cfg;
  if (j.contains("method")) cfg.method = parse_method(j.at("method").get<std::string>());
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.budget = j.value("budget", cfg.budget);
  cfg.tau = j.value("tau", cfg.tau);
  cfg.max_probe_loops = j.value("max_probe_loops", cfg.max_probe_loops);
  if (j.contains("rho")) {
    const auto& rho = j.at("rho");
    if (rho.is_string() && rho.get<std::string>() == "flat") {
      cfg.rho = RhoParams::uniform();
    } else {
      const auto v = rho.get<std::vector<double>>();
      if (v.size() != 4) throw std::invalid_argument("rho needs four values a,b,c,d");
      cfg.rho = RhoParams{v[0], v[1], v[2], v[3], 1.0, false};
    }
  }
  cfg.oracle = j.value("oracle", cfg.oracle);
  if (j.contains("images")) cfg.images = j.at("images").get<std::string>();
  cfg.seed = j.value("seed", cfg.seed);
  cfg.parallelism = j.value("parallelism", cfg.parallelism);
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("aggregate_over")) {
    cfg.aggregate_over = parse_aggregate_over(j.at("aggregate_over").get<std::string>());
  }
  cfg.count_verification_query = j.value("count_verification_query", cfg.count_verification_query);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& config) {
  ordered_json j;
  j["method"] = to_string(config.method);
  j["epsilon"] = config.epsilon;
  j["budget"] = config.budget;
  j["tau"] = config.tau;
  if (config.rho.flat) {
    j["rho"] = "flat";
  } else {
    j["rho"] = {config.rho.a, config.rho.b, config.rho.c, config.rho.d};
  }
  j["max_probe_loops"] = config.max_probe_loops;
  j["oracle"] = config.oracle;
  j["images"] = config.images.string();
  j["seed"] = config.seed;
  j["parallelism"] = config.parallelism;
  j["out"] = config.out.string();
  j["aggregate_over"] = to_string(config.aggregate_over);
  j["count_verification_query"] = config.count_verification_query;
  return j.dump(2) + "\n";
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<std::uint64_t> curve_thresholds(std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 100; t < budget; t += 100) out.push_back(t);
  out.push_back(budget);
  return out;
}

void aggregate(AggregateReport& report) {
  report.n_total = report.records.size();
  report.n_images = 0;
  report.successes = 0;
  std::vector<double> queries;
  double iterations = 0.0;
  double comparison_queries = 0.0;
  for (const auto& rec : report.records) {
    if (!rec.attacked()) continue;
    ++report.n_images;
    if (rec.success) ++report.successes;
    if (report.aggregate_over == AggregateOver::kSuccesses && !rec.success) continue;
    queries.push_back(static_cast<double>(rec.queries));
    iterations += static_cast<double>(rec.iterations);
    comparison_queries += static_cast<double>(rec.queries - rec.init_queries);
  }
  report.status = report.n_images == 0 ? ExperimentStatus::kNoEligibleImages
                                       : ExperimentStatus::kCompleted;
  const auto denom = static_cast<double>(report.n_images);
  report.success_rate = report.n_images == 0 ? 0.0 : static_cast<double>(report.successes) / denom;
  report.mean_queries = queries.empty() ? 0.0
                                        : std::accumulate(queries.begin(), queries.end(), 0.0) /
                                              static_cast<double>(queries.size());
  report.median_queries = median(queries);
  report.mean_iterations = queries.empty() ? 0.0 : iterations / static_cast<double>(queries.size());
  report.mean_queries_per_iteration = iterations == 0.0 ? 0.0 : comparison_queries / iterations;

  report.curve.clear();
  for (std::uint64_t t : curve_thresholds(report.budget)) {
    std::size_t hits = 0;
    for (const auto& rec : report.records) hits += rec.success && rec.queries <= t ? 1 : 0;
    report.curve.push_back({t, report.n_images == 0 ? 0.0 : static_cast<double>(hits) / denom});
  }
}

namespace {

ImageRecord attack_one(const ExperimentConfig& config, const LabeledImage& item,
                       std::size_t index, const OracleFactory& factory) {
  const AttackConfig cfg = config.attack_config(index);
  std::unique_ptr<Oracle> oracle = factory(config.budget);
  const AttackReport report = config.method == Method::kExactBaseline
                                  ? attack_exact(*oracle, item.image, item.label, cfg)
                                  : attack(*oracle, item.image, item.label, cfg);
  ImageRecord rec;
  rec.index = index;
  rec.status = report.status;
  rec.success = report.success;
  rec.queries = report.queries;
  rec.init_queries = report.init_queries;
  rec.iterations = report.iterations;
  rec.bisections = report.bisections;
  rec.r_final = report.r_final;
  rec.seed = cfg.seed;
  rec.trace_queries = report.trace.empty() ? 0 : report.trace.back().queries - report.init_queries;
  return rec;
}

}  // namespace

AggregateReport run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                               const OracleFactory& factory, std::ostream* log) {
  config.validate();
  if (dataset.records.empty()) throw EmptyDataset();

  AggregateReport report;
  report.method = config.method;
  report.aggregate_over = config.aggregate_over;
  report.budget = config.budget;
  report.records.resize(dataset.records.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dataset.records.size()) return;
      try {
        report.records[i] = attack_one(config, dataset.records[i], i, factory);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(dataset.records.size());
        return;
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(config.parallelism, dataset.records.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (log != nullptr) {
    for (const auto& rec : report.records) {
      *log << fmt::format("image {}: label {} {}\n", rec.index,
                          dataset.records[rec.index].label.class_id,
                          rec.attacked() ? "verified, attacked" : "misclassified, skipped");
    }
  }
  aggregate(report);
  return report;
}

AggregateReport run_experiment(const ExperimentConfig& config, std::ostream* log) {
  const Dataset dataset = load_images(config.images);
  const OracleFactory factory =
      make_oracle_factory(config.oracle, dataset.dimension, dataset.class_count);
  return run_experiment(config, dataset, factory, log);
}

std::string record_to_json_line(const ImageRecord& record) {
  ordered_json j;
  j["index"] = record.index;
  j["status"] = to_string(record.status);
  j["success"] = record.success;
  j["queries"] = record.queries;
  j["iterations"] = record.iterations;
  j["r_final"] = record.r_final;
  j["seed"] = record.seed;
  return j.dump() + "\n";
}

std::string summary_to_json(const AggregateReport& report) {
  ordered_json j;
  j["status"] = to_string(report.status);
  j["method"] = to_string(report.method);
  j["aggregate_over"] = to_string(report.aggregate_over);
  j["budget"] = report.budget;
  j["n_total"] = report.n_total;
  j["n_images"] = report.n_images;
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  j["mean_queries"] = report.mean_queries;
  j["median_queries"] = report.median_queries;
  j["mean_iterations"] = report.mean_iterations;
  j["mean_queries_per_iteration"] = report.mean_queries_per_iteration;
  std::uint64_t bisections = 0;
  for (const auto& rec : report.records) bisections += rec.bisections;
  j["total_bisections"] = bisections;
  ordered_json curve = ordered_json::array();
  for (const auto& p : report.curve) curve.push_back({p.threshold, p.success_fraction});
  j["curve"] = std::move(curve);
  return j.dump(2) + "\n";
}

std::string curve_table(const AggregateReport& report) {
  std::string out = "threshold\tsuccess_fraction\n";
  for (const auto& p : report.curve) out += fmt::format("{}\t{:.6f}\n", p.threshold, p.success_fraction);
  return out;
}

void emit_reports(const AggregateReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << body;
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
  };
  std::string stream;
  for (const auto& rec : report.records) stream += record_to_json_line(rec);
  write("results.jsonl", stream);
  write("summary.json", summary_to_json(report));
  write("curve.tsv", curve_table(report));
}

}  // namespace adba
