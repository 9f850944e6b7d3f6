#include "codisco/benchmark.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "codisco/graph.hpp"

namespace codisco {
namespace {

std::filesystem::path write_temp_file(const std::string& name,
                                      const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "codisco_bench";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

Dag chain_dag(int n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Dag(n, 0, std::move(edges));
}

// Modal multiplicity of the truth DAGs inside one partition block.
int dominant_copies(const ClusterInstance& instance,
                    const std::vector<EntityId>& block) {
  std::map<std::string, int> counts;
  int best = 0;
  for (EntityId id : block) {
    const int c = ++counts[to_text(instance.entities[id].dag)];
    best = std::max(best, c);
  }
  return best;
}

TEST(GenErdosRenyiTest, ZeroProbabilityGivesNoEdges) {
  const Dag d = gen_erdos_renyi(8, 0.0, 1);
  EXPECT_EQ(d.num_observed(), 8);
  EXPECT_EQ(d.num_latent(), 0);
  EXPECT_TRUE(d.edges().empty());
}

TEST(GenErdosRenyiTest, UnitProbabilityKeepsEveryPair) {
  const Dag d = gen_erdos_renyi(8, 1.0, 1);
  EXPECT_EQ(static_cast<int>(d.edges().size()), 8 * 7 / 2);
}

TEST(GenErdosRenyiTest, MeanEdgeCountTracksTheProbability) {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    total += static_cast<double>(gen_erdos_renyi(10, 0.3, seed).edges().size());
  }
  const double mean = total / 1000.0;
  EXPECT_NEAR(mean, 45 * 0.3, 0.5);
}

TEST(GenErdosRenyiTest, SeedsAreDeterministic) {
  EXPECT_EQ(to_text(gen_erdos_renyi(10, 0.3, 7)),
            to_text(gen_erdos_renyi(10, 0.3, 7)));
  EXPECT_NE(to_text(gen_erdos_renyi(10, 0.3, 7)),
            to_text(gen_erdos_renyi(10, 0.3, 8)));
}

TEST(GenErdosRenyiTest, RejectsBadArguments) {
  EXPECT_THROW(gen_erdos_renyi(0, 0.3, 1), std::invalid_argument);
  EXPECT_THROW(gen_erdos_renyi(5, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(gen_erdos_renyi(5, -0.1, 1), std::invalid_argument);
}

TEST(InjectLatentsTest, ZeroCountIsIdentity) {
  const Dag d = gen_erdos_renyi(6, 0.4, 2);
  EXPECT_TRUE(inject_latents(d, 0, 9) == d);
}

TEST(InjectLatentsTest, EachLatentConfoundsADistinctObservedPair) {
  const Dag base = load_network("earthquake");
  const Dag d = inject_latents(base, 2, 3);
  EXPECT_EQ(d.num_observed(), 5);
  EXPECT_EQ(d.num_latent(), 2);
  std::vector<NodeSet> pairs;
  for (NodeId v = 5; v < 7; ++v) {
    EXPECT_EQ(d.parents(v), NodeSet{0});
    const NodeSet kids = d.children(v);
    EXPECT_EQ(set_to_vector(kids).size(), 2u);
    EXPECT_EQ(kids & ~((NodeSet{1} << 5) - 1), NodeSet{0});
    pairs.push_back(kids);
  }
  EXPECT_NE(pairs[0], pairs[1]);
  for (const auto& [p, c] : base.edges()) EXPECT_TRUE(d.has_edge(p, c));
}

TEST(InjectLatentsTest, MoreLatentsThanPairsAreRejected) {
  EXPECT_THROW(inject_latents(Dag(3, 0, {}), 4, 1), std::invalid_argument);
  EXPECT_THROW(inject_latents(Dag(1, 0, {}), 1, 1), std::invalid_argument);
}

TEST(InjectLatentsTest, ConfounderOverAnEdgeKeepsTheDirectedMark) {
  const Dag d = inject_latents(Dag(2, 0, {{0, 1}}), 1, 4);
  EXPECT_EQ(d.num_latent(), 1);
  EXPECT_TRUE(dag_to_mag(d) == Mag(2, {directed_edge(0, 1)}));
}

TEST(PerturbTest, SatisfiedTargetReturnsTheInputUnchanged) {
  const Dag d = chain_dag(6);
  const Mag m = dag_to_mag(d);
  EXPECT_TRUE(perturb_to_target_distance(d, m, 0, PerturbMode::at_least, 1) ==
              d);
  EXPECT_TRUE(perturb_to_target_distance(d, m, 0, PerturbMode::exactly_at_most,
                                         1) == d);
}

TEST(PerturbTest, AtLeastModeMeetsTheFloor) {
  const Dag d = chain_dag(6);
  const Mag m = dag_to_mag(d);
  const Dag moved =
      perturb_to_target_distance(d, m, 6, PerturbMode::at_least, 1);
  EXPECT_GE(node_distance(dag_to_mag(moved), m), 6);
}

TEST(PerturbTest, ExactlyAtMostStaysInsideTheWindow) {
  const Dag d = chain_dag(6);
  const Mag m = dag_to_mag(d);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dag moved =
        perturb_to_target_distance(d, m, 3, PerturbMode::exactly_at_most,
                                   seed);
    const int dist = node_distance(dag_to_mag(moved), m);
    EXPECT_GT(dist, 0) << "seed " << seed;
    EXPECT_LE(dist, 3) << "seed " << seed;
  }
}

TEST(PerturbTest, LatentEdgesAreNeverTouched) {
  const Dag d(4, 1, {{0, 1}, {4, 2}, {4, 3}});
  const Dag moved =
      perturb_to_target_distance(d, dag_to_mag(d), 2, PerturbMode::at_least,
                                 5);
  EXPECT_EQ(moved.num_latent(), 1);
  EXPECT_TRUE(moved.has_edge(4, 2));
  EXPECT_TRUE(moved.has_edge(4, 3));
}

TEST(PerturbTest, EquivalenceConstrainedWalkKeepsTheRelation) {
  // Perfect matching: reversing a matched edge moves two node incidences
  // while leaving every separation statement alone, so the constrained walk
  // has somewhere to go.
  const Dag d(6, 0, {{0, 1}, {2, 3}, {4, 5}});
  const Mag m = dag_to_mag(d);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dag moved = perturb_to_target_distance(
        d, m, 2, PerturbMode::at_least, seed, /*markov_equiv=*/true);
    const Mag moved_mag = dag_to_mag(moved);
    EXPECT_TRUE(same_separation_relation(moved_mag, m)) << "seed " << seed;
    EXPECT_GE(node_distance(moved_mag, m), 2) << "seed " << seed;
  }
}

TEST(PerturbTest, RejectsBadTargets) {
  const Dag d = chain_dag(4);
  const Mag m = dag_to_mag(d);
  EXPECT_THROW(
      perturb_to_target_distance(d, m, -1, PerturbMode::at_least, 1),
      std::invalid_argument);
  EXPECT_THROW(perturb_to_target_distance(d, m, 5, PerturbMode::at_least, 1),
               std::invalid_argument);
  EXPECT_THROW(perturb_to_target_distance(d, dag_to_mag(chain_dag(5)), 1,
                                          PerturbMode::at_least, 1),
               std::invalid_argument);
}

TEST(PerturbTest, ImpossibleWalksThrowWithTheSeed) {
  // A lone collider is the only member of its equivalence class: every
  // insert or delete changes adjacencies and every reversal creates or
  // destroys the collider. The constrained walk can never move.
  const Dag d(3, 0, {{0, 1}, {2, 1}});
  try {
    perturb_to_target_distance(d, dag_to_mag(d), 3, PerturbMode::at_least, 77,
                               /*markov_equiv=*/true);
    FAIL() << "walk should have run out of steps";
  } catch (const GenerationFailure& err) {
    EXPECT_EQ(err.seed(), 77u);
  }
}

TEST(BuildInstanceTest, BalancedBetaInstanceHasTheDocumentedShape) {
  const InstanceParams params;  // 40 entities, 2 clusters, 0.6/0.2/0.9, n=10
  const ClusterInstance instance = build_instance(params, 11);

  ASSERT_EQ(instance.entities.size(), 40u);
  ASSERT_EQ(instance.truth_partition.clusters.size(), 2u);
  for (const auto& block : instance.truth_partition.clusters) {
    ASSERT_EQ(block.size(), 20u);
    // ceil(gamma * M / k) = 18 dominant copies; the two variants sit at a
    // nonzero marginal distance, so they can never match the dominant text.
    EXPECT_EQ(dominant_copies(instance, block), 18);
  }
  for (const EntityTruth& e : instance.entities) {
    EXPECT_EQ(e.dag.num_observed(), 10);
    EXPECT_EQ(e.dag.num_latent(), 2);
    EXPECT_TRUE(e.mag == dag_to_mag(e.dag));
  }
  for (EntityId i = 0; i < 40; ++i) {
    for (EntityId j = i + 1; j < 40; ++j) {
      const int dist = node_distance(instance.entities[i].mag,
                                     instance.entities[j].mag);
      if (instance.truth_partition.cluster_of(i) ==
          instance.truth_partition.cluster_of(j)) {
        EXPECT_LE(dist, 2) << "entities " << i << " and " << j;
      } else {
        EXPECT_GE(dist, 6) << "entities " << i << " and " << j;
      }
    }
  }
}

TEST(BuildInstanceTest, AlphaInstanceFillsClustersWithDominantCopies) {
  InstanceParams params;
  params.num_entities = 20;
  params.num_clusters = 2;
  params.alpha = 0.5;
  params.beta = 0.0;
  params.gamma = 1.0;
  params.num_observed = 8;
  const ClusterInstance instance = build_instance(params, 5);

  ASSERT_EQ(instance.entities.size(), 20u);
  for (const auto& block : instance.truth_partition.clusters) {
    ASSERT_EQ(block.size(), 10u);
    const std::string dominant = to_text(instance.entities[block[0]].dag);
    for (EntityId id : block) {
      EXPECT_EQ(to_text(instance.entities[id].dag), dominant);
    }
  }
  const Mag& first = instance.entities[0].mag;
  const Mag& second = instance.entities[10].mag;
  EXPECT_GE(node_distance(first, second), 4);
  if (instance.markov_equiv_achieved) {
    EXPECT_TRUE(same_separation_relation(first, second));
  }
}

TEST(BuildInstanceTest, BaseNetworkDrivesTheNodeCount) {
  InstanceParams params;
  params.num_entities = 4;
  params.num_clusters = 2;
  params.base_network = load_network("earthquake");
  params.network_label = "earthquake";
  const ClusterInstance instance = build_instance(params, 2);
  EXPECT_EQ(instance.params.num_observed, 5);
  for (const EntityTruth& e : instance.entities) {
    EXPECT_EQ(e.dag.num_observed(), 5);
    EXPECT_EQ(e.dag.num_latent(), 2);
  }
  validate_instance(instance);
}

TEST(BuildInstanceTest, SameSeedRebuildsTheSameInstance) {
  InstanceParams params;
  params.num_entities = 8;
  params.num_clusters = 2;
  const ClusterInstance a = build_instance(params, 21);
  const ClusterInstance b = build_instance(params, 21);
  ASSERT_EQ(a.entities.size(), b.entities.size());
  for (size_t i = 0; i < a.entities.size(); ++i) {
    EXPECT_EQ(to_text(a.entities[i].dag), to_text(b.entities[i].dag));
  }
  EXPECT_EQ(a.truth_partition.clusters, b.truth_partition.clusters);
  EXPECT_EQ(a.markov_equiv_achieved, b.markov_equiv_achieved);
}

TEST(BuildInstanceTest, RejectsUnevenOrOutOfRangeParameters) {
  InstanceParams params;
  params.num_entities = 10;
  params.num_clusters = 3;
  EXPECT_THROW(build_instance(params, 1), std::invalid_argument);
  params.num_clusters = 2;
  params.alpha = 0.0;
  EXPECT_THROW(build_instance(params, 1), std::invalid_argument);
  params.alpha = 0.6;
  params.beta = 0.6;
  EXPECT_THROW(build_instance(params, 1), std::invalid_argument);
  params.beta = 0.2;
  params.gamma = 0.0;
  EXPECT_THROW(build_instance(params, 1), std::invalid_argument);
}

TEST(BuildInstanceTest, ValidationCatchesACorruptedInstance) {
  InstanceParams params;
  params.num_entities = 4;
  params.num_clusters = 2;
  params.alpha = 0.5;
  params.beta = 0.0;
  params.gamma = 1.0;
  params.num_observed = 8;
  ClusterInstance instance = build_instance(params, 9);
  validate_instance(instance);
  std::swap(instance.entities[1].mag, instance.entities[2].mag);
  EXPECT_THROW(validate_instance(instance), std::invalid_argument);
}

TEST(LoadNetworkTest, BundledNamesResolveWithoutFiles) {
  const std::map<std::string, std::pair<int, int>> expected = {
      {"asia", {8, 8}},
      {"earthquake", {5, 4}},
      {"sachs", {11, 17}},
      {"survey", {6, 6}},
  };
  for (const auto& [name, shape] : expected) {
    const Dag d = load_network(name);
    EXPECT_EQ(d.num_observed(), shape.first) << name;
    EXPECT_EQ(d.num_latent(), 0) << name;
    EXPECT_EQ(static_cast<int>(d.edges().size()), shape.second) << name;
  }
}

TEST(LoadNetworkTest, StemMatchingFilesAreCheckedAgainstTheManifest) {
  const auto path =
      write_temp_file("asia.txt", "nodes 3 latents 0\n0 -> 1\n");
  try {
    load_network(path.string());
    FAIL() << "shape check should have fired";
  } catch (const std::runtime_error& err) {
    EXPECT_NE(std::string(err.what()).find("asia fixture should have 8"),
              std::string::npos);
  }
}

TEST(LoadNetworkTest, MalformedLinesReportTheLineNumber) {
  const auto path =
      write_temp_file("broken.txt", "nodes 3 latents 0\n0 -> 1\n0 ->\n");
  try {
    load_network(path.string());
    FAIL() << "parse should have failed";
  } catch (const std::runtime_error& err) {
    EXPECT_NE(std::string(err.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadNetworkTest, FreshFilesLoadVerbatim) {
  const auto path =
      write_temp_file("mynet.txt", "nodes 3 latents 0\n0 -> 1\n1 -> 2\n");
  const Dag d = load_network(path.string());
  EXPECT_EQ(d.num_observed(), 3);
  EXPECT_EQ(static_cast<int>(d.edges().size()), 2);
}

TEST(LoadNetworkTest, MissingFilesFailLoudly) {
  EXPECT_THROW(load_network("/no/such/network.txt"), std::runtime_error);
}

TEST(BundleTest, WriteReadRoundTripKeepsEverything) {
  InstanceParams params;
  params.num_entities = 6;
  params.num_clusters = 2;
  params.num_observed = 8;
  const ClusterInstance written = build_instance(params, 13);
  const auto dir =
      std::filesystem::temp_directory_path() / "codisco_bench" / "bundle";
  std::filesystem::remove_all(dir);
  write_bundle(written, dir.string());
  const ClusterInstance read = read_bundle(dir.string());

  ASSERT_EQ(read.entities.size(), written.entities.size());
  for (size_t i = 0; i < written.entities.size(); ++i) {
    EXPECT_EQ(read.entities[i].id, written.entities[i].id);
    EXPECT_EQ(to_text(read.entities[i].dag), to_text(written.entities[i].dag));
    EXPECT_TRUE(read.entities[i].mag == written.entities[i].mag);
  }
  EXPECT_EQ(read.truth_partition.clusters, written.truth_partition.clusters);
  EXPECT_EQ(read.seed, written.seed);
  EXPECT_EQ(read.markov_equiv_achieved, written.markov_equiv_achieved);
  EXPECT_DOUBLE_EQ(read.params.alpha, written.params.alpha);
  EXPECT_DOUBLE_EQ(read.params.beta, written.params.beta);
  EXPECT_DOUBLE_EQ(read.params.gamma, written.params.gamma);
  EXPECT_EQ(read.params.network_label, written.params.network_label);
  validate_instance(read);
}

}  // namespace
}  // namespace codisco
