// Copyright 2026 The vann Authors
//
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

// vann: build, search, benchmark and profile ANN indexes; sweep the vector
// unit model over profiled workloads.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vann/vann.hpp"

namespace {

using namespace vann;

enum ExitCode : int { kOk = 0, kOther = 1, kParam = 2, kIo = 3, kInfeasible = 4 };

std::uint64_t g_seed = 0;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// "kind:key=value,key=value"
struct DataSpec {
  std::string kind;
  std::map<std::string, std::string> kv;

  std::size_t get_size(const std::string& key, std::optional<std::size_t> fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (!fallback) throw InputError("dataset spec '" + kind + "': missing '" + key + "'");
      return *fallback;
    }
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc() || p != it->second.data() + it->second.size()) {
      throw InputError("dataset spec: '" + key + "=" + it->second + "' is not a non-negative integer");
    }
    return v;
  }
  std::string get_path() const {
    const auto it = kv.find("path");
    if (it == kv.end()) throw InputError("dataset spec '" + kind + "': missing 'path'");
    return it->second;
  }
};

DataSpec parse_spec(const std::string& text) {
  DataSpec s;
  const std::size_t colon = text.find(':');
  s.kind = text.substr(0, colon);
  if (colon == std::string::npos) return s;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw InputError("dataset spec: expected key=value, got '" + item + "'");
    s.kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return s;
}

Dataset load_dataset(const std::string& text) {
  const DataSpec s = parse_spec(text);
  if (s.kind == "synthetic") {
    return synthetic_gaussian(s.get_size("n", std::nullopt), s.get_size("d", std::nullopt),
                              s.get_size("clusters", 16), s.get_size("seed", g_seed),
                              s.get_size("stream", 0))
        .data;
  }
  if (s.kind == "libsvm") return load_libsvm(s.get_path(), s.get_size("dim", std::nullopt), s.get_size("rows", 0)).data;
  if (s.kind == "glove") return load_glove(s.get_path(), s.get_size("rows", 0)).data;
  throw InputError("unknown dataset kind '" + s.kind + "' (synthetic, libsvm, glove)");
}

struct BuildOpts {
  std::string nlist = "auto";
  BuildParams p;
  std::string levels = "geometric";
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--nlist", nlist, "IVF cell count, or 'auto' for 4*sqrt(n)")->capture_default_str();
    app->add_option("--pq-chunk", p.pq_chunk, "IVFPQ floats per chunk")->capture_default_str();
    app->add_option("--pq-bits", p.pq_bits, "IVFPQ bits per code")->capture_default_str();
    app->add_option("--nn", p.nn, "NSW neighbours per insert")->capture_default_str();
    app->add_option("--ef-construction", p.ef_construction)->capture_default_str();
    app->add_option("--M", p.hnsw_M, "HNSW links per layer")->capture_default_str();
    app->add_option("--hnsw-levels", levels, "geometric, equal or flat")->capture_default_str();
    app->add_option("--n-trees", p.n_trees, "Annoy trees")->capture_default_str();
    app->add_option("--leaf-cap", p.leaf_cap, "Annoy leaf size")->capture_default_str();
    app->add_option("--kmeans-iters", p.kmeans_iters)->capture_default_str();
    app->add_option("--seed", seed, "build seed (default: $VANN_SEED or 0)");
  }

  BuildParams resolve(std::size_t n) const {
    BuildParams out = p;
    out.seed = seed.value_or(g_seed);
    out.hnsw_levels = parse_level_mode(levels);
    if (nlist == "auto") {
      out.nlist = default_nlist(n);
    } else {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(nlist.data(), nlist.data() + nlist.size(), v);
      if (ec != std::errc() || ptr != nlist.data() + nlist.size() || v == 0) {
        throw InputError("--nlist must be 'auto' or a positive integer");
      }
      out.nlist = v;
    }
    return out;
  }
};

struct SearchOpts {
  std::size_t k = 10;
  SearchParams p;

  void add(CLI::App* app) {
    app->add_option("--k", k, "neighbours per query")->capture_default_str();
    app->add_option("--nprobe", p.nprobe, "IVF cells to probe")->capture_default_str();
    app->add_option("--ef-search", p.ef_search, "NSW/HNSW beam width")->capture_default_str();
    app->add_option("--search-budget", p.search_budget, "Annoy candidates (0: k*n_trees*2)")->capture_default_str();
  }
};

std::string describe(const AnyIndex& index) {
  std::string out = "algorithm: " + std::string(algorithm_name(algorithm_of(index))) + "\n";
  out += "n: " + std::to_string(index_size(index)) + "\n";
  out += "dim: " + std::to_string(index_dim(index)) + "\n";
  std::visit(
      [&](const auto& idx) {
        using T = std::decay_t<decltype(idx)>;
        if constexpr (std::is_same_v<T, IvfFlatIndex> || std::is_same_v<T, IvfPqIndex>) {
          out += "nlist: " + std::to_string(idx.lists().size()) + "\n";
        }
        if constexpr (std::is_same_v<T, IvfPqIndex>) {
          out += "pq_chunks: " + std::to_string(idx.codebook().M) + "\n";
          out += "pq_ksub: " + std::to_string(idx.codebook().ksub) + "\n";
        }
        if constexpr (std::is_same_v<T, HnswIndex>) {
          out += "max_level: " + std::to_string(idx.max_level()) + "\n";
        }
        if constexpr (std::is_same_v<T, AnnoyIndex>) {
          out += "n_trees: " + std::to_string(idx.roots().size()) + "\n";
        }
      },
      index);
  return out;
}

std::string results_csv(const std::vector<SearchResult>& results) {
  std::string out = "query,rank,id,distance\n";
  for (std::size_t q = 0; q < results.size(); ++q) {
    for (std::size_t r = 0; r < results[q].ids.size(); ++r) {
      out += std::to_string(q) + "," + std::to_string(r) + "," + std::to_string(results[q].ids[r]) + "," +
             fmt("%.9g", results[q].distances[r]) + "\n";
    }
  }
  return out;
}

void emit(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vann: approximate nearest neighbour indexes and vector unit sweeps"};
  app.require_subcommand(1);
  app.add_option("--global-seed", g_seed, "seed fallback for every command")
      ->envname("VANN_SEED")
      ->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "build an index and save it");
  std::string b_algo, b_data, b_out;
  BuildOpts b_opts;
  build->add_option("--algo", b_algo, "flat, ivfflat, ivfpq, nsw, hnsw or annoy")->required();
  build->add_option("--data", b_data, "dataset spec")->required();
  build->add_option("--out", b_out, "index file")->required();
  b_opts.add(build);

  // search
  auto* srch = app.add_subcommand("search", "query a saved index");
  std::string s_index, s_queries, s_out, s_truth, s_data;
  SearchOpts s_opts;
  srch->add_option("--index", s_index)->required();
  srch->add_option("--queries", s_queries, "dataset spec")->required();
  srch->add_option("--out", s_out, "results CSV (default: stdout)");
  srch->add_option("--truth", s_truth, "'exact' to report recall@k")->check(CLI::IsMember({"exact"}));
  srch->add_option("--data", s_data, "dataset spec for the exact oracle (default: vectors held by the index)");
  s_opts.add(srch);

  // bench
  auto* bench = app.add_subcommand("bench", "time builds and searches over repetitions");
  std::vector<std::string> bn_algos, bn_data, bn_queries;
  std::string bn_out;
  std::size_t bn_reps = 10;
  BuildOpts bn_build;
  SearchOpts bn_search;
  bench->add_option("--algo", bn_algos)->required()->delimiter(',');
  bench->add_option("--data", bn_data, "dataset spec (repeatable)")->required();
  bench->add_option("--queries", bn_queries, "one spec per --data, or one for all")->required();
  bench->add_option("--reps", bn_reps)->capture_default_str();
  bench->add_option("--out", bn_out, "report CSV (default: stdout)");
  bn_build.add(bench);
  bn_search.add(bench);

  // profile
  auto* prof = app.add_subcommand("profile", "count distance calls per query");
  std::vector<std::string> p_index;
  std::string p_queries, p_out;
  SearchOpts p_opts;
  prof->add_option("--index", p_index, "index file (repeatable)")->required();
  prof->add_option("--queries", p_queries)->required();
  prof->add_option("--out", p_out, "profiles JSON (default: stdout)");
  p_opts.add(prof);

  // sweep
  auto* swp = app.add_subcommand("sweep", "sweep vector unit configurations");
  std::string w_spec, w_profiles, w_csv, w_json, w_summary;
  unsigned w_threads = 1;
  swp->add_option("--spec", w_spec, "sweep spec JSON (default grid if omitted)");
  swp->add_option("--profiles", w_profiles, "profiles JSON")->required();
  swp->add_option("--out", w_csv, "per-config CSV");
  swp->add_option("--json", w_json, "structured report");
  swp->add_option("--summary-csv", w_summary, "winner summary CSV");
  swp->add_option("--threads", w_threads)->capture_default_str()->check(CLI::Range(1u, 256u));

  // exact
  auto* ex = app.add_subcommand("exact", "exact k nearest neighbours");
  std::string e_data, e_queries, e_out;
  std::size_t e_k = 10;
  ex->add_option("--data", e_data)->required();
  ex->add_option("--queries", e_queries)->required();
  ex->add_option("--k", e_k)->capture_default_str();
  ex->add_option("--out", e_out, "results CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParam;
  }

  try {
    if (*build) {
      const Algorithm algo = parse_algorithm(b_algo);
      const Dataset data = load_dataset(b_data);
      const BuildParams p = b_opts.resolve(data.size());
      validate_build(algo, p, data.size(), data.dim());
      const auto t0 = std::chrono::steady_clock::now();
      const AnyIndex index = build_index(algo, data, p);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      save_index(index, b_out);
      std::cout << describe(index) << "seed: " << p.seed << "\n"
                << "build_seconds: " << fmt("%.6f", secs) << "\n";
    } else if (*srch) {
      const AnyIndex index = load_index(s_index);
      const Dataset queries = load_dataset(s_queries);
      const auto results = search_batch(index, queries, s_opts.k, s_opts.p);
      emit(results_csv(results), s_out);
      if (!s_truth.empty()) {
        std::optional<Dataset> base;
        if (!s_data.empty()) {
          base = load_dataset(s_data);
        } else {
          std::visit(
              [&](const auto& idx) {
                using T = std::decay_t<decltype(idx)>;
                if constexpr (std::is_same_v<T, IvfPqIndex>) {
                  throw InputError("--truth exact on an ivfpq index needs --data (codes are lossy)");
                } else if constexpr (std::is_same_v<T, IvfFlatIndex>) {
                  base = idx.reconstruct();
                } else {
                  base = idx.data();
                }
              },
              index);
        }
        const auto truth = exact_knn_batch(*base, queries, s_opts.k);
        std::cout << "recall@" << s_opts.k << ": " << fmt("%.17g", mean_recall(results, truth)) << "\n";
      }
    } else if (*bench) {
      if (bn_queries.size() != 1 && bn_queries.size() != bn_data.size()) {
        throw InputError("bench: give one --queries spec or one per --data");
      }
      std::vector<BenchRun> runs;
      for (std::size_t i = 0; i < bn_data.size(); ++i) {
        const Dataset data = load_dataset(bn_data[i]);
        const Dataset queries = load_dataset(bn_queries.size() == 1 ? bn_queries[0] : bn_queries[i]);
        const BuildParams p = bn_build.resolve(data.size());
        std::vector<Algorithm> algos;
        for (const std::string& a : bn_algos) algos.push_back(parse_algorithm(a));
        for (Algorithm a : algos) validate_build(a, p, data.size(), data.dim());
        for (Algorithm a : algos) {
          runs.push_back(run_bench(a, bn_data[i], data, queries, bn_search.k, p, bn_search.p, bn_reps));
        }
      }
      emit(render_csv(bench_report(runs)), bn_out);
    } else if (*prof) {
      const Dataset queries = load_dataset(p_queries);
      std::vector<WorkloadProfile> profiles;
      for (const std::string& path : p_index) {
        profiles.push_back(profile_query(load_index(path), queries, p_opts.k, p_opts.p));
      }
      emit(render_profiles(profiles), p_out);
    } else if (*swp) {
      const SweepSpec spec = w_spec.empty() ? default_sweep_spec() : load_sweep_spec(w_spec);
      const SweepResult result = sweep(spec, load_profiles(w_profiles), w_threads);
      const WinnerSummary summary = winner_summary(result);
      if (!w_csv.empty()) write_report(sweep_report(result), ReportFormat::csv, w_csv);
      if (!w_json.empty()) write_text_file(w_json, render_summary_structured(summary));
      if (!w_summary.empty()) write_report(summary_report(summary), ReportFormat::csv, w_summary);
      std::cout << render_summary_text(summary);
      if (result.infeasible) std::cout << "infeasible configurations skipped: " << result.infeasible << "\n";
    } else if (*ex) {
      const Dataset data = load_dataset(e_data);
      const Dataset queries = load_dataset(e_queries);
      emit(results_csv(exact_knn_batch(data, queries, e_k)), e_out);
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "vann: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "vann: " << e.what() << "\n";
    return kParam;
  } catch (const InputError& e) {
    std::cerr << "vann: " << e.what() << "\n";
    return kParam;
  } catch (const IoError& e) {
    std::cerr << "vann: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    // parse, format, truncation and version errors in input files
    std::cerr << "vann: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "vann: " << e.what() << "\n";
    return kOther;
  }
  return kOk;
}
