// adba: run hard-label attack experiments, build toy datasets, serve toy models.

#include <chrono>
#include <csignal>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "adba/dataset.hpp"
#include "adba/harness.hpp"
#include "adba/remote.hpp"
#include "adba/toys.hpp"

namespace {

adba::RhoParams parse_rho(const std::string& text) {
  if (text == "flat") return adba::RhoParams::uniform();
  std::istringstream in(text);
  std::vector<double> values;
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(std::stod(item));
  if (values.size() != 4) throw CLI::ValidationError("--rho", "expects a,b,c,d or 'flat'");
  adba::RhoParams p{values[0], values[1], values[2], values[3], 1.0, false};
  p.validate();
  return p;
}

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-efficient hard-label adversarial attacks"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "attack every correctly classified image in a dataset");
  std::optional<std::string> config_path;
  std::string method = "adba";
  double epsilon = 0.05;
  std::uint64_t budget = 10000;
  double tau = 0.002;
  std::string rho = "0.0313,3.066,0.168,1.134";
  std::string oracle = "builtin:linear";
  std::string images;
  std::uint64_t seed = 0;
  unsigned parallelism = 1;
  std::string out = "results";
  std::string aggregate_over = "successes";
  bool count_verification = false;
  int max_probe_loops = 64;
  run->add_option("--config", config_path, "JSON config; explicit flags override it");
  run->add_option("--method", method, "adba | adba-md | adba-ccm | exact-baseline");
  run->add_option("--epsilon", epsilon, "l-infinity success threshold");
  run->add_option("--budget", budget, "query budget per image");
  run->add_option("--tau", tau, "bracket width below which two directions tie");
  run->add_option("--rho", rho, "boundary density a,b,c,d, or 'flat'");
  run->add_option("--max-probe-loops", max_probe_loops, "cap on bracket probes per comparison");
  run->add_option("--oracle", oracle, "builtin:<name>[:arg] | remote:<host:port>");
  run->add_option("--images", images, "dataset container");
  run->add_option("--seed", seed, "base seed; image i uses seed + i");
  run->add_option("--parallelism", parallelism, "concurrent attacks");
  run->add_option("--out", out, "output directory");
  run->add_option("--aggregate-over", aggregate_over, "successes | all");
  run->add_flag("--count-verification-query", count_verification,
                "charge the initial correctness query to the budget");

  // make-dataset
  auto* make = app.add_subcommand("make-dataset", "write a dataset labeled by a builtin linear model");
  std::string make_out;
  std::size_t make_count = 20;
  std::size_t make_n = 64;
  std::uint32_t make_k = 3;
  std::uint64_t make_seed = 0;
  std::uint64_t model_seed = 0;
  make->add_option("--out", make_out, "dataset path")->required();
  make->add_option("--count", make_count, "number of images");
  make->add_option("--n", make_n, "image dimension");
  make->add_option("--k", make_k, "class count");
  make->add_option("--seed", make_seed, "image seed");
  make->add_option("--model-seed", model_seed, "seed of builtin:linear:<seed>");

  // serve
  auto* serve = app.add_subcommand("serve", "serve a builtin model over the wire protocol");
  std::string serve_oracle = "builtin:linear";
  std::size_t serve_n = 64;
  std::uint32_t serve_k = 3;
  std::uint16_t port = 0;
  serve->add_option("--oracle", serve_oracle, "builtin:<name>[:arg]");
  serve->add_option("--n", serve_n, "image dimension");
  serve->add_option("--k", serve_k, "class count");
  serve->add_option("--port", port, "TCP port on 127.0.0.1 (0 picks one)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      adba::ExperimentConfig cfg = config_path ? adba::load_config(*config_path) : adba::ExperimentConfig{};
      auto given = [&](const char* flag) { return !config_path || run->count(flag) > 0; };
      if (given("--method")) cfg.method = adba::parse_method(method);
      if (given("--epsilon")) cfg.epsilon = epsilon;
      if (given("--budget")) cfg.budget = budget;
      if (given("--tau")) cfg.tau = tau;
      if (given("--rho")) cfg.rho = parse_rho(rho);
      if (given("--max-probe-loops")) cfg.max_probe_loops = max_probe_loops;
      if (given("--oracle")) cfg.oracle = oracle;
      if (given("--images")) cfg.images = images;
      if (given("--seed")) cfg.seed = seed;
      if (given("--parallelism")) cfg.parallelism = parallelism;
      if (given("--out")) cfg.out = out;
      if (given("--aggregate-over")) cfg.aggregate_over = adba::parse_aggregate_over(aggregate_over);
      if (given("--count-verification-query")) cfg.count_verification_query = count_verification;
      if (cfg.images.empty()) throw std::invalid_argument("--images is required");

      const adba::AggregateReport report = adba::run_experiment(cfg, &std::cerr);
      adba::emit_reports(report, cfg.out);
      std::cout << adba::summary_to_json(report);
      return report.status == adba::ExperimentStatus::kCompleted ? 0 : 3;
    }

    if (make->parsed()) {
      const adba::toys::LinearModel model = adba::toys::random_linear_model(model_seed, make_n, make_k);
      std::mt19937_64 rng(make_seed);
      std::uniform_real_distribution<double> pixel(0.25, 0.75);
      adba::Dataset ds;
      ds.dimension = make_n;
      ds.class_count = make_k;
      for (std::size_t i = 0; i < make_count; ++i) {
        std::vector<double> xs(make_n);
        for (double& v : xs) v = static_cast<float>(pixel(rng));
        adba::ImageVector x(std::move(xs));
        const adba::Label y = model.predict(x);
        ds.records.push_back({std::move(x), y});
      }
      adba::save_images(make_out, ds);
      std::cout << "wrote " << make_count << " images to " << make_out << "\n";
      return 0;
    }

    if (serve->parsed()) {
      auto factory = adba::make_oracle_factory(serve_oracle, serve_n, serve_k);
      auto model = factory(~std::uint64_t{0});
      std::mutex model_mutex;
      adba::ModelServer server(serve_n, serve_k, [&](std::span<const double> image) {
        std::lock_guard lock(model_mutex);
        return model->query_uncounted(image).class_id;
      }, port);
      std::cout << "MODEL " << serve_n << " " << serve_k << " listening on " << server.address()
                << std::endl;
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (g_stop == 0) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "adba: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
