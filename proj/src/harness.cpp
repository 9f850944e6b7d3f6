#include "codisco/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "codisco/pag.hpp"
#include "json.hpp"

namespace codisco {

PairMetrics pair_metrics(const ClusterResult& predicted,
                         const ClusterResult& truth) {
  const int m = truth.num_entities();
  if (predicted.num_entities() != m) {
    throw std::invalid_argument(
        "partitions cover different entity universes");
  }
  PairMetrics out;
  for (EntityId i = 0; i < m; ++i) {
    for (EntityId j = i + 1; j < m; ++j) {
      const bool together_truth = truth.cluster_of(i) == truth.cluster_of(j);
      const bool together_pred =
          predicted.cluster_of(i) == predicted.cluster_of(j);
      ++out.total_pairs;
      if (together_truth) ++out.truth_together;
      if (together_pred) ++out.predicted_together;
      if (together_truth && together_pred) ++out.correct_together;
      if (!together_truth && !together_pred) ++out.correct_apart;
    }
  }
  if (out.predicted_together > 0) {
    out.precision = static_cast<double>(out.correct_together) /
                    static_cast<double>(out.predicted_together);
  }
  if (out.truth_together > 0) {
    out.recall = static_cast<double>(out.correct_together) /
                 static_cast<double>(out.truth_together);
  }
  if (out.total_pairs > 0) {
    out.accuracy =
        static_cast<double>(out.correct_together + out.correct_apart) /
        static_cast<double>(out.total_pairs);
  }
  return out;
}

std::vector<Pag> pags_for(const ClusterInstance& instance) {
  std::vector<Pag> pags;
  pags.reserve(instance.entities.size());
  std::vector<const Mag*> distinct;
  std::vector<Pag> built;
  for (const EntityTruth& e : instance.entities) {
    size_t at = 0;
    while (at < distinct.size() && !(*distinct[at] == e.mag)) ++at;
    if (at == distinct.size()) {
      distinct.push_back(&e.mag);
      built.push_back(class_or_skeleton_pag(e.mag));
    }
    pags.push_back(built[at]);
  }
  return pags;
}

namespace {

std::vector<EntityOracle> make_oracles(const ClusterInstance& instance,
                                       double noise,
                                       std::uint64_t run_seed) {
  std::vector<EntityOracle> oracles;
  oracles.reserve(instance.entities.size());
  for (const EntityTruth& e : instance.entities) {
    oracles.emplace_back(e.id, e.dag, noise,
                         run_seed * 1000003ULL +
                             static_cast<std::uint64_t>(e.id));
  }
  return oracles;
}

struct AlgoRun {
  ClusterResult clusters;
  RecoveryReport report;
  bool is_baseline = false;
  bool low_confidence = false;
};

AlgoRun dispatch_algo(const std::string& algo,
                      std::vector<EntityOracle>& oracles,
                      const std::vector<Pag>& pags, AlgoParams params,
                      int num_clusters) {
  AlgoRun run;
  auto take = [&run](ClusterOutcome outcome) {
    run.clusters = std::move(outcome.clusters);
    run.report = std::move(outcome.report);
  };
  if (algo == "ab-bounded") {
    take(cluster_alpha_beta(oracles, pags, params));
  } else if (algo == "greedy") {
    params.explicit_sample = greedy_sample_selection(
        pags, params.sample_size_override.value_or(1));
    params.sample_size_override.reset();
    take(cluster_alpha_beta(oracles, pags, params));
  } else if (algo == "a-bounded") {
    take(cluster_alpha_bounded(oracles, pags, params));
  } else if (algo == "no-latents") {
    take(cluster_no_latents(oracles, pags, params));
  } else if (algo == "a-general") {
    take(cluster_alpha_general(oracles, pags, params));
  } else if (algo == "fci-baseline") {
    BaselineOutcome outcome = baseline_pag_cluster(pags, num_clusters);
    run.clusters = std::move(outcome.clusters);
    run.is_baseline = true;
    run.low_confidence = outcome.low_confidence;
  } else {
    throw std::invalid_argument("unknown algorithm: " + algo);
  }
  return run;
}

int max_ledger(const std::vector<EntityOracle>& oracles) {
  int best = 0;
  for (const EntityOracle& o : oracles) {
    best = std::max(best, o.intervention_count());
  }
  return best;
}

AlgoParams params_for(const ExperimentConfig& config,
                      const InstanceParams& instance,
                      std::uint64_t run_seed) {
  AlgoParams params;
  params.alpha = instance.alpha;
  params.beta = instance.beta;
  params.delta = config.delta;
  params.sample_size_override = config.sample_size;
  params.rng_seed = run_seed;
  return params;
}

struct OneRun {
  RunResult result;
  int realized_sample = 0;
};

OneRun run_once(const ExperimentConfig& config, std::uint64_t run_seed) {
  const auto start = std::chrono::steady_clock::now();
  const ClusterInstance instance = build_instance(config.instance, run_seed);
  std::vector<EntityOracle> oracles =
      make_oracles(instance, config.noise, run_seed);
  const std::vector<Pag> pags = pags_for(instance);
  const AlgoRun run =
      dispatch_algo(config.algo, oracles, pags,
                    params_for(config, instance.params, run_seed),
                    instance.params.num_clusters);
  OneRun out;
  out.result.seed = run_seed;
  out.result.metrics = pair_metrics(run.clusters, instance.truth_partition);
  out.result.max_interventions = max_ledger(oracles);
  out.result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.realized_sample =
      run.is_baseline ? 0 : static_cast<int>(run.report.sample.size());
  return out;
}

// Batched fan-out across run seeds; results come back in seed order, so the
// aggregate never depends on scheduling.
template <typename Fn>
auto across_seeds(int runs, std::uint64_t base_seed, Fn fn)
    -> std::vector<decltype(fn(base_seed))> {
  using Result = decltype(fn(base_seed));
  const int width = std::max(
      1, std::min(runs, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<Result> results;
  results.reserve(runs);
  for (int base = 0; base < runs; base += width) {
    std::vector<std::future<Result>> batch;
    const int stop = std::min(runs, base + width);
    for (int r = base; r < stop; ++r) {
      batch.push_back(
          std::async(std::launch::async, fn, base_seed + r));
    }
    for (auto& f : batch) results.push_back(f.get());
  }
  return results;
}

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

std::optional<double> stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::nullopt;
  const double mean = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::runtime_error("bad numeric field: " + token);
  }
  return value;
}

const char* kCsvHeader =
    "network,algo,alpha,beta,gamma,sample_size,precision_mean,precision_std,"
    "recall_mean,recall_std,accuracy_mean,accuracy_std,max_interventions,"
    "runs,seed";

}  // namespace

ExperimentRecord run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("need at least one run");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<OneRun> runs = across_seeds(
      config.runs, config.seed,
      [&config](std::uint64_t run_seed) { return run_once(config, run_seed); });

  ExperimentRecord record;
  record.network = config.instance.network_label;
  record.algo = config.algo;
  record.alpha = config.instance.alpha;
  record.beta = config.instance.beta;
  record.gamma = config.instance.gamma;
  record.sample_size = runs.front().realized_sample;
  record.runs = config.runs;
  record.seed = config.seed;

  std::vector<double> precision, recall, accuracy;
  for (const OneRun& run : runs) {
    record.per_run.push_back(run.result);
    precision.push_back(run.result.metrics.precision);
    recall.push_back(run.result.metrics.recall);
    accuracy.push_back(run.result.metrics.accuracy);
    record.max_interventions =
        std::max(record.max_interventions, run.result.max_interventions);
  }
  record.precision_mean = mean_of(precision);
  record.recall_mean = mean_of(recall);
  record.accuracy_mean = mean_of(accuracy);
  record.precision_std = stddev_of(precision);
  record.recall_std = stddev_of(recall);
  record.accuracy_std = stddev_of(accuracy);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ExperimentRecord& r : records) {
    auto opt = [](const std::optional<double>& x) {
      return x.has_value() ? format_double(*x) : std::string();
    };
    out += r.network + ',' + r.algo + ',' + format_double(r.alpha) + ',' +
           format_double(r.beta) + ',' + format_double(r.gamma) + ',' +
           std::to_string(r.sample_size) + ',' +
           format_double(r.precision_mean) + ',' + opt(r.precision_std) +
           ',' + format_double(r.recall_mean) + ',' + opt(r.recall_std) +
           ',' + format_double(r.accuracy_mean) + ',' + opt(r.accuracy_std) +
           ',' + std::to_string(r.max_interventions) + ',' +
           std::to_string(r.runs) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("unrecognized CSV header");
  }
  std::vector<ExperimentRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string token;
    std::istringstream split(line);
    while (std::getline(split, token, ',')) fields.push_back(token);
    // A trailing empty field is dropped by getline; only the std columns
    // may be empty and they are never last.
    if (fields.size() != 15) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 15 CSV fields");
    }
    auto opt = [](const std::string& f) -> std::optional<double> {
      if (f.empty()) return std::nullopt;
      return parse_double(f);
    };
    ExperimentRecord r;
    r.network = fields[0];
    r.algo = fields[1];
    r.alpha = parse_double(fields[2]);
    r.beta = parse_double(fields[3]);
    r.gamma = parse_double(fields[4]);
    r.sample_size = std::stoi(fields[5]);
    r.precision_mean = parse_double(fields[6]);
    r.precision_std = opt(fields[7]);
    r.recall_mean = parse_double(fields[8]);
    r.recall_std = opt(fields[9]);
    r.accuracy_mean = parse_double(fields[10]);
    r.accuracy_std = opt(fields[11]);
    r.max_interventions = std::stoi(fields[12]);
    r.runs = std::stoi(fields[13]);
    r.seed = std::stoull(fields[14]);
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

nlohmann::json record_to_json(const ExperimentRecord& r) {
  auto opt = [](const std::optional<double>& x) {
    return x.has_value() ? nlohmann::json(*x) : nlohmann::json(nullptr);
  };
  nlohmann::json j{
      {"network", r.network},
      {"algo", r.algo},
      {"alpha", r.alpha},
      {"beta", r.beta},
      {"gamma", r.gamma},
      {"sample_size", r.sample_size},
      {"precision_mean", r.precision_mean},
      {"precision_std", opt(r.precision_std)},
      {"recall_mean", r.recall_mean},
      {"recall_std", opt(r.recall_std)},
      {"accuracy_mean", r.accuracy_mean},
      {"accuracy_std", opt(r.accuracy_std)},
      {"max_interventions", r.max_interventions},
      {"runs", r.runs},
      {"seed", r.seed},
      {"wall_seconds", r.wall_seconds},
  };
  j["per_run"] = nlohmann::json::array();
  for (const RunResult& run : r.per_run) {
    j["per_run"].push_back({
        {"seed", run.seed},
        {"precision", run.metrics.precision},
        {"recall", run.metrics.recall},
        {"accuracy", run.metrics.accuracy},
        {"max_interventions", run.max_interventions},
        {"wall_seconds", run.wall_seconds},
    });
  }
  return j;
}

}  // namespace

std::string to_json(const ExperimentRecord& record) {
  return record_to_json(record).dump(2);
}

std::string to_json(const std::vector<ExperimentRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExperimentRecord& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2);
}

std::vector<SweepRow> sample_size_sweep(const ExperimentConfig& config,
                                        int max_size) {
  if (max_size < 1) {
    throw std::invalid_argument("sweep needs a positive sample size");
  }
  if (config.runs < 1) throw std::invalid_argument("need at least one run");

  // Per run: one instance, one drawn node sequence; |S| = j uses the first
  // j draws on fresh oracles, so per-run ledgers are nested across j.
  auto run_one = [&config, max_size](std::uint64_t run_seed) {
    const ClusterInstance instance =
        build_instance(config.instance, run_seed);
    const int n = instance.params.num_observed;
    std::mt19937_64 rng(run_seed);
    std::vector<NodeId> drawn;
    for (int i = 0; i < max_size; ++i) {
      drawn.push_back(static_cast<NodeId>(rng() % static_cast<unsigned>(n)));
    }
    const std::vector<Pag> pags = pags_for(instance);
    std::vector<int> maxima;
    for (int j = 1; j <= max_size; ++j) {
      std::vector<EntityOracle> oracles =
          make_oracles(instance, config.noise, run_seed);
      AlgoParams params = params_for(config, instance.params, run_seed);
      if (config.algo == "greedy") {
        params.sample_size_override = j;
      } else {
        params.explicit_sample =
            std::vector<NodeId>(drawn.begin(), drawn.begin() + j);
        params.sample_size_override.reset();
      }
      dispatch_algo(config.algo, oracles, pags, params,
                    instance.params.num_clusters);
      maxima.push_back(max_ledger(oracles));
    }
    return maxima;
  };

  const std::vector<std::vector<int>> per_run =
      across_seeds(config.runs, config.seed, run_one);
  std::vector<SweepRow> rows;
  for (int j = 1; j <= max_size; ++j) {
    std::vector<double> values;
    for (const auto& maxima : per_run) {
      values.push_back(static_cast<double>(maxima[j - 1]));
    }
    rows.push_back({j, mean_of(values)});
    if (j > 1 && rows[j - 1].max_interventions_mean + 1e-9 <
                     rows[j - 2].max_interventions_mean) {
      throw std::logic_error(
          "intervention curve decreased when the sample grew");
    }
  }
  return rows;
}

std::string to_csv(const ExperimentConfig& config,
                   const std::vector<SweepRow>& rows) {
  std::string out = "network,algo,sample_size,max_interventions_mean,runs,seed\n";
  for (const SweepRow& row : rows) {
    out += config.instance.network_label + ',' + config.algo + ',' +
           std::to_string(row.sample_size) + ',' +
           format_double(row.max_interventions_mean) + ',' +
           std::to_string(config.runs) + ',' + std::to_string(config.seed) +
           '\n';
  }
  return out;
}

namespace {

struct CliOptions {
  std::string network = "er";
  std::vector<std::string> algos = {"ab-bounded"};
  double alpha = 0.6;
  double beta = 0.2;
  double gamma = 0.9;
  double delta = 0.05;
  double noise = 0.0;
  double edge_prob = 0.3;
  int entities = 40;
  int clusters = 2;
  int nodes = 10;
  int latents = 2;
  int sample_size = 1;
  int runs = 10;
  int max_sample = 3;
  std::uint64_t seed = 0;
  std::string out;
  std::string json_out;
  std::string bundle;
  std::string partition_file;
};

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

InstanceParams instance_from(const CliOptions& o) {
  InstanceParams params;
  params.num_entities = o.entities;
  params.num_clusters = o.clusters;
  params.alpha = o.alpha;
  params.beta = o.beta;
  params.gamma = o.gamma;
  params.num_observed = o.nodes;
  params.edge_prob = o.edge_prob;
  params.latents_per_dag = o.latents;
  params.network_label = o.network;
  if (o.network != "er") params.base_network = load_network(o.network);
  return params;
}

ExperimentConfig config_from(const CliOptions& o, const std::string& algo,
                             const CLI::App* cmd) {
  ExperimentConfig config;
  config.instance = instance_from(o);
  if (algo == "no-latents" && !flag_given(cmd, "--latents")) {
    config.instance.latents_per_dag = 0;
  }
  config.algo = algo;
  if (flag_given(cmd, "--sample-size")) config.sample_size = o.sample_size;
  config.delta = o.delta;
  config.noise = o.noise;
  config.runs = o.runs;
  config.seed = o.seed;
  return config;
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write to " + out);
  file << text;
}

ClusterResult partition_from_file(const std::string& path, int num_entities) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  return make_partition(
      doc.at("clusters").get<std::vector<std::vector<EntityId>>>(),
      num_entities);
}

nlohmann::json metrics_json(const PairMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"accuracy", m.accuracy}};
}

int cli_generate(const CliOptions& o) {
  const ClusterInstance instance = build_instance(instance_from(o), o.seed);
  const std::string dir = o.out.empty() ? "instance" : o.out;
  write_bundle(instance, dir);
  std::cout << "wrote " << instance.entities.size() << " entities to " << dir
            << "\n";
  return 0;
}

int cli_cluster(const CliOptions& o, const CLI::App* cmd) {
  const ClusterInstance bundle = read_bundle(o.bundle);
  std::vector<EntityOracle> oracles = make_oracles(bundle, o.noise, o.seed);
  const std::vector<Pag> pags = pags_for(bundle);
  AlgoParams params;
  params.alpha = bundle.params.alpha;
  params.beta = bundle.params.beta;
  params.delta = o.delta;
  if (flag_given(cmd, "--sample-size")) {
    params.sample_size_override = o.sample_size;
  }
  params.rng_seed = o.seed;
  const AlgoRun run = dispatch_algo(o.algos.front(), oracles, pags, params,
                                    bundle.params.num_clusters);
  nlohmann::json doc = nlohmann::json::parse(to_json(run.clusters));
  if (run.is_baseline) {
    doc["low_confidence"] = run.low_confidence;
  } else {
    doc["report"] = nlohmann::json::parse(to_json(run.report));
  }
  doc["metrics"] =
      metrics_json(pair_metrics(run.clusters, bundle.truth_partition));
  write_text(o.out, doc.dump(2) + "\n");
  return 0;
}

int cli_recover(const CliOptions& o, const CLI::App* cmd) {
  const ClusterInstance bundle = read_bundle(o.bundle);
  std::vector<EntityOracle> oracles = make_oracles(bundle, o.noise, o.seed);
  const std::vector<Pag> pags = pags_for(bundle);
  const int m = static_cast<int>(bundle.entities.size());

  ClusterResult partition;
  if (!o.partition_file.empty()) {
    partition = partition_from_file(o.partition_file, m);
  } else {
    const std::string algo = flag_given(cmd, "--algo")
                                 ? o.algos.front()
                                 : (bundle.params.beta > 0.0 ? "ab-bounded"
                                                             : "a-bounded");
    AlgoParams params;
    params.alpha = bundle.params.alpha;
    params.beta = bundle.params.beta;
    params.delta = o.delta;
    if (flag_given(cmd, "--sample-size")) {
      params.sample_size_override = o.sample_size;
    }
    params.rng_seed = o.seed;
    partition =
        dispatch_algo(algo, oracles, pags, params, bundle.params.num_clusters)
            .clusters;
  }

  nlohmann::json doc;
  if (bundle.params.beta > 0.0) {
    AlgoParams params;
    params.alpha = bundle.params.alpha;
    params.beta = bundle.params.beta;
    params.delta = o.delta;
    params.rng_seed = o.seed;
    const RecoveryReport report =
        recover_dominant_mags(oracles, pags, partition, params);
    doc = nlohmann::json::parse(to_json(report));
  } else {
    const std::vector<Mag> recovered = meta_recover(oracles, pags, partition);
    doc["recovered"] = nlohmann::json::array();
    for (const Mag& g : recovered) doc["recovered"].push_back(to_text(g));
    doc["intervention_counts"] = nlohmann::json::array();
    for (const EntityOracle& oracle : oracles) {
      doc["intervention_counts"].push_back(oracle.intervention_count());
    }
  }
  doc["clusters"] =
      nlohmann::json::parse(to_json(partition)).at("clusters");
  write_text(o.out, doc.dump(2) + "\n");
  return 0;
}

int cli_evaluate(const CliOptions& o, const CLI::App* cmd) {
  std::vector<ExperimentRecord> records;
  for (const std::string& algo : o.algos) {
    records.push_back(run_experiment(config_from(o, algo, cmd)));
  }
  write_text(o.out, to_csv(records));
  if (!o.json_out.empty()) write_text(o.json_out, to_json(records) + "\n");
  return 0;
}

int cli_sweep(const CliOptions& o, const CLI::App* cmd) {
  const ExperimentConfig config = config_from(o, o.algos.front(), cmd);
  const std::vector<SweepRow> rows = sample_size_sweep(config, o.max_sample);
  write_text(o.out, to_csv(config, rows));
  return 0;
}

void add_instance_flags(CLI::App* cmd, CliOptions& o) {
  static const CLI::Validator network_validator(
      [](std::string& value) -> std::string {
        static const std::vector<std::string> names = {
            "asia", "earthquake", "sachs", "survey", "er"};
        if (std::find(names.begin(), names.end(), value) != names.end()) {
          return {};
        }
        if (std::filesystem::exists(value)) return {};
        return value + " is not a network name or a readable file";
      },
      "NETWORK|FILE");
  cmd->add_option("--network", o.network,
                  "truth structure name or DAG text file")
      ->check(network_validator);
  cmd->add_option("--entities", o.entities, "number of entities M");
  cmd->add_option("--clusters", o.clusters, "number of clusters k");
  cmd->add_option("--alpha", o.alpha, "cross-cluster distance floor");
  cmd->add_option("--beta", o.beta, "within-cluster distance cap");
  cmd->add_option("--gamma", o.gamma, "dominant fraction per cluster");
  cmd->add_option("--nodes", o.nodes, "observed nodes (er only)");
  cmd->add_option("--edge-prob", o.edge_prob, "edge probability (er only)");
  cmd->add_option("--latents", o.latents, "latent confounders per entity");
  cmd->add_option("--seed", o.seed, "base seed");
}

void add_algo_flags(CLI::App* cmd, CliOptions& o, bool multiple) {
  auto* opt = cmd->add_option("--algo", o.algos, "clustering algorithm")
                  ->check(CLI::IsMember({"ab-bounded", "a-bounded",
                                         "no-latents", "a-general",
                                         "fci-baseline", "greedy"}));
  if (!multiple) opt->expected(1);
  cmd->add_option("--sample-size", o.sample_size,
                  "|S| override (absent: theory-sized)");
  cmd->add_option("--delta", o.delta, "failure probability");
  cmd->add_option("--noise", o.noise, "CI answer flip probability");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"collaborative causal discovery over simulated CI oracles"};
  app.require_subcommand(1);
  CliOptions o;

  CLI::App* generate = app.add_subcommand(
      "generate", "build a synthetic instance bundle");
  add_instance_flags(generate, o);
  generate->add_option("--out", o.out, "bundle directory (default: instance)");

  CLI::App* cluster = app.add_subcommand(
      "cluster", "cluster the entities of a bundle");
  cluster->add_option("bundle", o.bundle, "instance bundle directory")
      ->required();
  add_algo_flags(cluster, o, false);
  cluster->add_option("--seed", o.seed, "sampling seed");
  cluster->add_option("--out", o.out, "JSON output file (default: stdout)");

  CLI::App* recover = app.add_subcommand(
      "recover", "recover per-cluster graphs from a bundle");
  recover->add_option("bundle", o.bundle, "instance bundle directory")
      ->required();
  add_algo_flags(recover, o, false);
  recover->add_option("--partition", o.partition_file,
                      "clustering JSON to reuse (default: cluster first)");
  recover->add_option("--seed", o.seed, "sampling seed");
  recover->add_option("--out", o.out, "JSON output file (default: stdout)");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "run experiments and emit a metrics table");
  add_instance_flags(evaluate, o);
  add_algo_flags(evaluate, o, true);
  evaluate->add_option("--runs", o.runs, "instances per record");
  evaluate->add_option("--out", o.out, "CSV output file (default: stdout)");
  evaluate->add_option("--json", o.json_out, "full-record JSON output file");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "sample size against max interventions per entity");
  add_instance_flags(sweep, o);
  add_algo_flags(sweep, o, false);
  sweep->add_option("--runs", o.runs, "instances per sample size");
  sweep->add_option("--max-sample-size", o.max_sample,
                    "largest |S| to sweep");
  sweep->add_option("--out", o.out, "CSV output file (default: stdout)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("codisco");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(generate)) return cli_generate(o);
    if (app.got_subcommand(cluster)) return cli_cluster(o, cluster);
    if (app.got_subcommand(recover)) return cli_recover(o, recover);
    if (app.got_subcommand(evaluate)) return cli_evaluate(o, evaluate);
    if (app.got_subcommand(sweep)) return cli_sweep(o, sweep);
  } catch (const GenerationFailure& err) {
    std::cerr << "generation failed: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace codisco
