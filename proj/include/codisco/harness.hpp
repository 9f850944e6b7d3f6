#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codisco/benchmark.hpp"
#include "codisco/discovery.hpp"

namespace codisco {

// Pairwise clustering quality over all M(M-1)/2 unordered entity pairs.
// The degenerate denominators (no predicted-together pairs, no
// truth-together pairs) score 1 so the metrics stay total.
struct PairMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double accuracy = 1.0;
  long long correct_together = 0;
  long long predicted_together = 0;
  long long truth_together = 0;
  long long correct_apart = 0;
  long long total_pairs = 0;
};

// Throws std::invalid_argument when the two partitions cover different
// entity universes.
PairMetrics pair_metrics(const ClusterResult& predicted,
                         const ClusterResult& truth);

// One PAG per entity (the class PAG when the edge count allows enumeration,
// the all-circle skeleton otherwise), constructed once per distinct MAG:
// instances hold many copies of each dominant graph.
std::vector<Pag> pags_for(const ClusterInstance& instance);

// One experiment: `runs` instances built from consecutive seeds, each
// clustered by `algo`, scored against the ground-truth partition.
// Algorithms: ab-bounded, a-bounded, no-latents, a-general, fci-baseline,
// greedy (degree-greedy sample fed to the ab-bounded clustering).
struct ExperimentConfig {
  InstanceParams instance;
  std::string algo = "ab-bounded";
  // Nodes in the shared sample S; absent means the algorithm's own
  // theory-sized formula.
  std::optional<int> sample_size;
  double delta = 0.05;
  // Probability of flipping each CI answer, for robustness studies.
  double noise = 0.0;
  int runs = 10;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::uint64_t seed = 0;
  PairMetrics metrics;
  int max_interventions = 0;
  double wall_seconds = 0.0;
};

struct ExperimentRecord {
  std::string network;
  std::string algo;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int sample_size = 0;  // realized |S|; 0 for the intervention-free baseline
  double precision_mean = 0.0;
  double recall_mean = 0.0;
  double accuracy_mean = 0.0;
  // Absent when runs < 2.
  std::optional<double> precision_std;
  std::optional<double> recall_std;
  std::optional<double> accuracy_std;
  int max_interventions = 0;  // max over runs of the per-run ledger maximum
  int runs = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::vector<RunResult> per_run;
};

// Runs execute in parallel across seeds; each run is sequential and fully
// determined by its own seed, so the aggregate is reproducible.
ExperimentRecord run_experiment(const ExperimentConfig& config);

// Stable-schema CSV: network, algo, alpha, beta, gamma, sample_size,
// precision_mean, precision_std, recall_mean, recall_std, accuracy_mean,
// accuracy_std, max_interventions, runs, seed. Empty std cells when a
// record has fewer than two runs.
std::string to_csv(const std::vector<ExperimentRecord>& records);

// Parses to_csv output back into records (the CSV columns only; per-run
// details and wall time live in the JSON form).
std::vector<ExperimentRecord> parse_csv(const std::string& text);

std::string to_json(const ExperimentRecord& record);
std::string to_json(const std::vector<ExperimentRecord>& records);

struct SweepRow {
  int sample_size = 0;
  double max_interventions_mean = 0.0;
};

// Mean (over runs) of the max per-entity ledger count at |S| = 1..max_size.
// Samples are prefix-nested within a run, so the curve is non-decreasing;
// a violation throws std::logic_error. |S| = 0 would spend nothing during
// clustering and is omitted.
std::vector<SweepRow> sample_size_sweep(const ExperimentConfig& config,
                                        int max_size = 3);

std::string to_csv(const ExperimentConfig& config,
                   const std::vector<SweepRow>& rows);

// The command-line entry point, callable in-process for tests. `args`
// excludes the program name. Returns 0 on success, 2 on usage errors, 3 on
// generation failure, 1 on any other error.
int run_cli(const std::vector<std::string>& args);

}  // namespace codisco
