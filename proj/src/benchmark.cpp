#include "codisco/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace codisco {

namespace {

double rng_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int rng_below(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

std::vector<std::pair<NodeId, NodeId>> all_edges(const Dag& d) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  const int total = d.num_observed() + d.num_latent();
  for (NodeId v = 0; v < d.num_observed(); ++v) {
    for (NodeId u : set_to_vector(d.parents(v))) edges.emplace_back(u, v);
  }
  for (NodeId v = d.num_observed(); v < total; ++v) {
    for (NodeId u : set_to_vector(d.parents(v))) edges.emplace_back(u, v);
  }
  return edges;
}

int count_edges(const Dag& d) { return static_cast<int>(all_edges(d).size()); }

bool reaches(const std::vector<NodeSet>& kids, NodeId from, NodeId to) {
  NodeSet frontier = node_bit(from);
  NodeSet seen = frontier;
  while (frontier != 0) {
    NodeSet next = 0;
    for (NodeId v : set_to_vector(frontier)) next |= kids[v];
    frontier = next & ~seen;
    seen |= frontier;
  }
  return contains(seen, to);
}

}  // namespace

Dag gen_erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one node");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<NodeId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng_below(rng, i + 1)]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng_unit(rng) < p) edges.emplace_back(order[i], order[j]);
    }
  }
  return Dag(n, 0, std::move(edges));
}

Dag inject_latents(const Dag& d, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("latent count must be >= 0");
  if (count == 0) return d;
  const int n = d.num_observed();
  if (n < 2) throw std::invalid_argument("need two observed nodes to confound");
  const int pairs = n * (n - 1) / 2;
  if (count > pairs) {
    throw std::invalid_argument("more latents than observed pairs");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    NodeId a = rng_below(rng, n);
    NodeId b = rng_below(rng, n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (std::find(chosen.begin(), chosen.end(), std::make_pair(a, b)) !=
        chosen.end()) {
      continue;
    }
    chosen.emplace_back(a, b);
  }
  std::vector<std::pair<NodeId, NodeId>> edges = all_edges(d);
  NodeId next_latent = n + d.num_latent();
  for (const auto& [a, b] : chosen) {
    edges.emplace_back(next_latent, a);
    edges.emplace_back(next_latent, b);
    ++next_latent;
  }
  return Dag(n, d.num_latent() + count, std::move(edges));
}

Dag perturb_to_target_distance(const Dag& d, const Mag& reference, int target,
                               PerturbMode mode, std::uint64_t seed,
                               bool markov_equiv, int step_cap) {
  const int n = d.num_observed();
  if (reference.num_nodes() != n) {
    throw std::invalid_argument("reference MAG node count mismatch");
  }
  if (target < 0 || target > n) {
    throw std::invalid_argument("target distance must lie in [0, n]");
  }
  if (step_cap <= 0) step_cap = 10 * n * n;

  std::vector<std::pair<NodeId, NodeId>> latent_edges;
  std::vector<std::pair<NodeId, NodeId>> obs_edges;
  for (const auto& e : all_edges(d)) {
    (e.first >= n ? latent_edges : obs_edges).push_back(e);
  }
  std::vector<NodeSet> kids(n, 0);
  for (const auto& [a, b] : obs_edges) kids[a] = with_node(kids[a], b);

  auto build = [&](const std::vector<std::pair<NodeId, NodeId>>& obs) {
    std::vector<std::pair<NodeId, NodeId>> edges = obs;
    edges.insert(edges.end(), latent_edges.begin(), latent_edges.end());
    return Dag(n, d.num_latent(), std::move(edges));
  };

  auto satisfied = [&](int dist) {
    return mode == PerturbMode::at_least ? dist >= target : dist == target;
  };

  Dag current = d;
  int current_dist = node_distance(dag_to_mag(current), reference);
  if (satisfied(current_dist)) return current;

  std::mt19937_64 rng(seed);
  for (int step = 0; step < step_cap; ++step) {
    const int kind = rng_below(rng, 3);
    std::vector<std::pair<NodeId, NodeId>> next_edges = obs_edges;
    if (kind == 0) {  // insert
      NodeId a = rng_below(rng, n);
      NodeId b = rng_below(rng, n);
      if (a == b || contains(kids[a], b) || contains(kids[b], a)) continue;
      if (reaches(kids, b, a)) continue;
      next_edges.emplace_back(a, b);
    } else if (kind == 1) {  // delete
      if (obs_edges.empty()) continue;
      next_edges.erase(next_edges.begin() + rng_below(rng, obs_edges.size()));
    } else {  // reverse
      if (obs_edges.empty()) continue;
      const int at = rng_below(rng, obs_edges.size());
      const auto [a, b] = next_edges[at];
      next_edges.erase(next_edges.begin() + at);
      std::vector<NodeSet> without = kids;
      without[a] = without_node(without[a], b);
      if (reaches(without, a, b)) continue;
      next_edges.emplace_back(b, a);
    }

    Dag candidate = build(next_edges);
    Mag candidate_mag = dag_to_mag(candidate);
    if (markov_equiv && !same_separation_relation(candidate_mag, reference)) {
      continue;
    }
    const int dist = node_distance(candidate_mag, reference);
    if (mode == PerturbMode::exactly_at_most && dist > target) continue;

    obs_edges = std::move(next_edges);
    kids.assign(n, 0);
    for (const auto& [a, b] : obs_edges) kids[a] = with_node(kids[a], b);
    current = std::move(candidate);
    current_dist = dist;
    if (satisfied(current_dist)) return current;
  }
  if (mode == PerturbMode::exactly_at_most && current_dist > 0 &&
      current_dist <= target) {
    return current;
  }
  throw GenerationFailure("perturbation walk missed its distance target",
                          seed);
}

namespace {

int ceil_positive(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

struct DominantSet {
  std::vector<Dag> dags;
  std::vector<Mag> mags;
  bool equivalent = false;
};

DominantSet build_dominants(const InstanceParams& params, int n, int t_dom,
                            std::mt19937_64& master) {
  const bool alpha_mode = params.beta == 0.0;
  DominantSet out;
  Dag first = params.base_network.has_value()
                  ? inject_latents(*params.base_network,
                                   params.latents_per_dag, master())
                  : inject_latents(gen_erdos_renyi(n, params.edge_prob,
                                                   master()),
                                   params.latents_per_dag, master());
  out.dags.push_back(first);
  out.mags.push_back(dag_to_mag(first));
  out.equivalent = alpha_mode;

  auto grow = [&](bool want_equiv) -> bool {
    while (static_cast<int>(out.dags.size()) < params.num_clusters) {
      bool placed = false;
      for (int attempt = 0; attempt < 5 && !placed; ++attempt) {
        Dag cand(1, 0, {});
        try {
          cand = perturb_to_target_distance(out.dags[0], out.mags[0], t_dom,
                                            PerturbMode::at_least, master(),
                                            want_equiv);
        } catch (const GenerationFailure&) {
          continue;
        }
        Mag cand_mag = dag_to_mag(cand);
        bool fits = true;
        for (size_t b = 1; b < out.mags.size() && fits; ++b) {
          fits = node_distance(cand_mag, out.mags[b]) >= t_dom;
        }
        if (!fits) continue;
        out.dags.push_back(std::move(cand));
        out.mags.push_back(std::move(cand_mag));
        placed = true;
      }
      if (!placed) return false;
    }
    return true;
  };

  if (alpha_mode && params.num_clusters > 1) {
    if (!grow(true)) {
      // Markov-equivalent separation is not reachable from this dominant;
      // fall back to distance-only separation and record it.
      out.dags.erase(out.dags.begin() + 1, out.dags.end());
      out.mags.erase(out.mags.begin() + 1, out.mags.end());
      out.equivalent = false;
      if (!grow(false)) {
        throw GenerationFailure("could not separate dominant graphs", 0);
      }
    }
  } else if (!grow(false)) {
    throw GenerationFailure("could not separate dominant graphs", 0);
  }
  return out;
}

}  // namespace

ClusterInstance build_instance(const InstanceParams& params,
                               std::uint64_t seed) {
  if (params.num_entities < 1 || params.num_clusters < 1 ||
      params.num_clusters > params.num_entities ||
      params.num_entities % params.num_clusters != 0) {
    throw std::invalid_argument(
        "entity count must be a positive multiple of the cluster count");
  }
  if (params.alpha <= 0.0 || params.alpha > 1.0 || params.beta < 0.0 ||
      params.beta >= params.alpha) {
    throw std::invalid_argument("need 0 <= beta < alpha <= 1");
  }
  if (params.gamma <= 0.0 || params.gamma > 1.0) {
    throw std::invalid_argument("gamma must lie in (0, 1]");
  }
  if (params.edge_prob < 0.0 || params.edge_prob > 1.0) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  if (params.latents_per_dag < 0) {
    throw std::invalid_argument("latent count must be >= 0");
  }
  const int n = params.base_network.has_value()
                    ? params.base_network->num_observed()
                    : params.num_observed;
  if (n < 2) throw std::invalid_argument("need at least two observed nodes");

  const bool alpha_mode = params.beta == 0.0;
  const int per_cluster = params.num_entities / params.num_clusters;
  const int t_var = static_cast<int>(std::floor(params.beta * n + 1e-9));
  // Extra slack on the dominant separation keeps variants (within t_var of
  // their dominant) above the cross-cluster floor by the triangle
  // inequality; the pairwise validation below still has the final word.
  const int t_dom = std::min(
      n, ceil_positive(params.alpha * n) + (alpha_mode ? 0 : t_var));
  int copies = alpha_mode ? per_cluster
                          : std::min(per_cluster,
                                     ceil_positive(params.gamma *
                                                   params.num_entities /
                                                   params.num_clusters));
  // Any edge change shows up in both endpoints' incidence sets, so nonzero
  // node distances are always >= 2 and a variant slot under a cap of 1 can
  // never be filled. Fail before burning the retry budget.
  if (!alpha_mode && copies < per_cluster && t_var < 2) {
    throw GenerationFailure(
        "variants need within-cluster distance 2 but beta*n allows " +
            std::to_string(t_var) + "; raise beta or set gamma to 1",
        seed);
  }

  std::mt19937_64 master(seed);
  for (int attempt = 0; attempt < 20; ++attempt) {
    try {
      DominantSet doms = build_dominants(params, n, t_dom, master);

      ClusterInstance instance;
      instance.params = params;
      instance.params.num_observed = n;
      instance.seed = seed;
      instance.markov_equiv_achieved =
          alpha_mode && (params.num_clusters == 1 || doms.equivalent);

      std::vector<std::vector<EntityId>> blocks(params.num_clusters);
      EntityId next_id = 0;
      for (int a = 0; a < params.num_clusters; ++a) {
        for (int c = 0; c < copies; ++c) {
          blocks[a].push_back(next_id);
          instance.entities.push_back({next_id, doms.dags[a], doms.mags[a]});
          ++next_id;
        }
        for (int v = copies; v < per_cluster; ++v) {
          bool placed = false;
          for (int tries = 0; tries < 30 && !placed; ++tries) {
            Dag cand(1, 0, {});
            try {
              cand = perturb_to_target_distance(doms.dags[a], doms.mags[a],
                                                t_var,
                                                PerturbMode::exactly_at_most,
                                                master());
            } catch (const GenerationFailure&) {
              continue;
            }
            Mag cand_mag = dag_to_mag(cand);
            bool fits = true;
            for (const EntityTruth& other : instance.entities) {
              const bool together =
                  other.id >= a * per_cluster &&
                  other.id < (a + 1) * per_cluster;
              const int dist = node_distance(cand_mag, other.mag);
              if (together ? dist > t_var
                           : dist + 1e-9 < params.alpha * n) {
                fits = false;
                break;
              }
            }
            if (!fits) continue;
            blocks[a].push_back(next_id);
            instance.entities.push_back(
                {next_id, std::move(cand), std::move(cand_mag)});
            ++next_id;
            placed = true;
          }
          if (!placed) {
            throw GenerationFailure("variant placement exhausted retries",
                                    seed);
          }
        }
      }
      instance.truth_partition =
          make_partition(std::move(blocks), params.num_entities);
      validate_instance(instance);
      return instance;
    } catch (const GenerationFailure&) {
      continue;
    }
  }
  throw GenerationFailure("instance construction exhausted retries", seed);
}

void validate_instance(const ClusterInstance& instance) {
  const int m = static_cast<int>(instance.entities.size());
  if (instance.truth_partition.num_entities() != m) {
    throw std::invalid_argument("partition does not cover the entities");
  }
  if (m == 0) return;
  const int n = instance.entities[0].mag.num_nodes();
  const double within_cap = instance.params.beta * n + 1e-9;
  const double cross_floor = instance.params.alpha * n - 1e-9;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const int dist = node_distance(instance.entities[i].mag,
                                     instance.entities[j].mag);
      const bool together = instance.truth_partition.cluster_of(i) ==
                            instance.truth_partition.cluster_of(j);
      if (together && dist > within_cap) {
        throw std::invalid_argument(
            "within-cluster distance bound violated by entities " +
            std::to_string(i) + " and " + std::to_string(j));
      }
      if (!together && dist < cross_floor) {
        throw std::invalid_argument(
            "cross-cluster distance bound violated by entities " +
            std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

namespace {

struct NetworkFixture {
  const char* text;
  int nodes;
  int edges;
};

// Structure-only renditions of the standard repository networks.
const std::map<std::string, NetworkFixture>& network_manifest() {
  static const std::map<std::string, NetworkFixture> manifest = {
      {"asia",
       {"# asia=0 tub=1 smoke=2 lung=3 bronc=4 either=5 xray=6 dysp=7\n"
        "nodes 8 latents 0\n"
        "0 -> 1\n2 -> 3\n2 -> 4\n1 -> 5\n3 -> 5\n4 -> 7\n5 -> 6\n5 -> 7\n",
        8, 8}},
      {"earthquake",
       {"# burglary=0 earthquake=1 alarm=2 johncalls=3 marycalls=4\n"
        "nodes 5 latents 0\n"
        "0 -> 2\n1 -> 2\n2 -> 3\n2 -> 4\n",
        5, 4}},
      {"sachs",
       {"# akt=0 erk=1 jnk=2 mek=3 p38=4 pip2=5 pip3=6 pka=7 pkc=8 plcg=9 "
        "raf=10\n"
        "nodes 11 latents 0\n"
        "1 -> 0\n7 -> 0\n3 -> 1\n7 -> 1\n7 -> 2\n8 -> 2\n7 -> 3\n8 -> 3\n"
        "10 -> 3\n7 -> 4\n8 -> 4\n9 -> 5\n6 -> 5\n9 -> 6\n7 -> 10\n8 -> 10\n"
        "8 -> 7\n",
        11, 17}},
      {"survey",
       {"# age=0 sex=1 edu=2 occ=3 res=4 trans=5\n"
        "nodes 6 latents 0\n"
        "0 -> 2\n1 -> 2\n2 -> 3\n2 -> 4\n3 -> 5\n4 -> 5\n",
        6, 6}},
  };
  return manifest;
}

}  // namespace

Dag load_network(const std::string& path_or_name) {
  const auto& manifest = network_manifest();
  std::string text;
  std::string key;
  auto builtin = manifest.find(path_or_name);
  if (builtin != manifest.end() &&
      !std::filesystem::exists(path_or_name)) {
    text = builtin->second.text;
    key = path_or_name;
  } else {
    std::ifstream in(path_or_name);
    if (!in) {
      throw std::runtime_error("cannot open network file: " + path_or_name);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    key = std::filesystem::path(path_or_name).stem().string();
  }
  Dag d = parse_dag(text);
  auto expect = manifest.find(key);
  if (expect != manifest.end()) {
    const int total = d.num_observed() + d.num_latent();
    if (total != expect->second.nodes ||
        count_edges(d) != expect->second.edges) {
      throw std::runtime_error(
          key + " fixture should have " +
          std::to_string(expect->second.nodes) + " nodes and " +
          std::to_string(expect->second.edges) + " edges");
    }
  }
  return d;
}

void write_bundle(const ClusterInstance& instance, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json j;
  j["num_entities"] = instance.params.num_entities;
  j["num_clusters"] = instance.params.num_clusters;
  j["alpha"] = instance.params.alpha;
  j["beta"] = instance.params.beta;
  j["gamma"] = instance.params.gamma;
  j["num_observed"] = instance.params.num_observed;
  j["edge_prob"] = instance.params.edge_prob;
  j["latents_per_dag"] = instance.params.latents_per_dag;
  j["network"] = instance.params.network_label;
  j["seed"] = instance.seed;
  j["markov_equiv_achieved"] = instance.markov_equiv_achieved;
  j["partition"] = instance.truth_partition.clusters;
  std::vector<std::string> files;
  for (const EntityTruth& e : instance.entities) {
    char name[32];
    std::snprintf(name, sizeof(name), "entity_%03d.txt", e.id);
    files.emplace_back(name);
    std::ofstream out(fs::path(dir) / name);
    out << to_text(e.dag);
    if (!out) throw std::runtime_error("cannot write " + std::string(name));
  }
  j["entity_files"] = files;
  std::ofstream out(fs::path(dir) / "instance.json");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write instance.json");
}

ClusterInstance read_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "instance.json");
  if (!in) throw std::runtime_error("cannot open " + dir + "/instance.json");
  nlohmann::json j = nlohmann::json::parse(in);

  ClusterInstance instance;
  instance.params.num_entities = j.at("num_entities").get<int>();
  instance.params.num_clusters = j.at("num_clusters").get<int>();
  instance.params.alpha = j.at("alpha").get<double>();
  instance.params.beta = j.at("beta").get<double>();
  instance.params.gamma = j.at("gamma").get<double>();
  instance.params.num_observed = j.at("num_observed").get<int>();
  instance.params.edge_prob = j.at("edge_prob").get<double>();
  instance.params.latents_per_dag = j.at("latents_per_dag").get<int>();
  instance.params.network_label = j.at("network").get<std::string>();
  instance.seed = j.at("seed").get<std::uint64_t>();
  instance.markov_equiv_achieved = j.at("markov_equiv_achieved").get<bool>();
  instance.truth_partition = make_partition(
      j.at("partition").get<std::vector<std::vector<EntityId>>>(),
      instance.params.num_entities);

  EntityId id = 0;
  for (const auto& name : j.at("entity_files")) {
    std::ifstream dag_in(fs::path(dir) / name.get<std::string>());
    if (!dag_in) {
      throw std::runtime_error("cannot open " + name.get<std::string>());
    }
    std::ostringstream buf;
    buf << dag_in.rdbuf();
    Dag d = parse_dag(buf.str());
    Mag m = dag_to_mag(d);
    instance.entities.push_back({id, std::move(d), std::move(m)});
    ++id;
  }
  if (id != instance.params.num_entities) {
    throw std::runtime_error("bundle entity count mismatch");
  }
  return instance;
}

}  // namespace codisco
