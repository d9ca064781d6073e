#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qwalkvec/embed.hpp"
#include "qwalkvec/graph.hpp"
#include "qwalkvec/protocol.hpp"
#include "qwalkvec/skipgram.hpp"
#include "qwalkvec/spread.hpp"
#include "qwalkvec/walks.hpp"

namespace qwalkvec::cli {

inline constexpr const char* tool_version = "0.1.0";

enum exit_code : int { ok = 0, data_failure = 1, usage_failure = 2 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered key=value record of a run. Keys are flag names, so a manifest is
// also a valid --config file and `replay` can re-execute it.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, std::string value) { entries.emplace_back(key, std::move(value)); }

  std::string str() const {
    std::ostringstream os;
    os << "# qwalkvec run manifest\n# version=" << tool_version << "\ncommand=" << command << '\n';
    for (const auto& [k, v] : entries) os << k << '=' << v << '\n';
    return os.str();
  }

  static RunManifest parse(std::string_view text) {
    RunManifest m;
    detail::for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
      if (line.front() == '#') return;
      auto eq = line.find('=');
      if (eq == std::string_view::npos) throw parse_error("expected key=value", line_no);
      std::string key(detail::trim(line.substr(0, eq)));
      std::string value(detail::trim(line.substr(eq + 1)));
      if (key == "command")
        m.command = value;
      else
        m.entries.emplace_back(key, value);
    });
    return m;
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw data_error("write failed for '" + path + "'");
}

inline std::string manifest_path(const std::string& out) { return out + ".manifest"; }

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (auto tok : detail::tokenize(text)) {
    try {
      out.push_back(detail::parse_double(tok, 0));
    } catch (const parse_error&) {
      throw usage_error(std::string("bad value in ") + what + ": '" + std::string(tok) + "'");
    }
  }
  if (out.empty()) throw usage_error(std::string(what) + " must not be empty");
  return out;
}

inline std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + detail::shortest(v[i]);
  return s;
}

struct EmbedOptions {
  std::string edges;
  std::string method = "qwalkvec";
  std::size_t t = 0;
  double wp = 1.0, wq = 1.0, p = 1.0, q = 1.0;
  std::size_t gamma = 80, window = 10, dim = 128, negatives = 5, epochs = 5;
  double lr = 0.025;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string out;
  std::string corpus;

  void record(RunManifest& m) const {
    m.set("edges", edges);
    m.set("method", method);
    m.set("t", std::to_string(t));
    if (method == "qwalkvec") {
      m.set("wp", detail::shortest(wp));
      m.set("wq", detail::shortest(wq));
    } else {
      if (method == "node2vec") {
        m.set("p", detail::shortest(p));
        m.set("q", detail::shortest(q));
      }
      m.set("gamma", std::to_string(gamma));
      m.set("window", std::to_string(window));
      m.set("dim", std::to_string(dim));
      m.set("negatives", std::to_string(negatives));
      m.set("epochs", std::to_string(epochs));
      m.set("lr", detail::shortest(lr));
      if (!corpus.empty()) m.set("corpus", corpus);
    }
    m.set("seed", std::to_string(seed));
    m.set("threads", std::to_string(threads));
  }
};

inline void add_method_flags(CLI::App& cmd, EmbedOptions& o, bool grid) {
  if (!grid) {
    cmd.add_option("--wp", o.wp, "QWalkVec return parameter")->check(CLI::PositiveNumber);
    cmd.add_option("--wq", o.wq, "QWalkVec in-out parameter")->check(CLI::PositiveNumber);
    cmd.add_option("--p", o.p, "node2vec return parameter")->check(CLI::PositiveNumber);
    cmd.add_option("--q", o.q, "node2vec in-out parameter")->check(CLI::PositiveNumber);
    cmd.add_option("--corpus", o.corpus, "also write the walk corpus here");
  }
  cmd.add_option("--gamma", o.gamma, "walks per node")->check(CLI::PositiveNumber);
  cmd.add_option("--window", o.window, "skip-gram window")->check(CLI::PositiveNumber);
  cmd.add_option("--dim", o.dim, "skip-gram dimension")->check(CLI::Range(2, 1 << 16));
  cmd.add_option("--negatives", o.negatives, "negative samples per pair");
  cmd.add_option("--epochs", o.epochs, "skip-gram epochs")->check(CLI::PositiveNumber);
  cmd.add_option("--lr", o.lr, "initial learning rate")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 1024));
}

// Builds the embedding described by `o` for one (a, b) pair of method parameters.
inline FeatureMatrix build_embedding(const Graph& g, const EmbedOptions& o, double a, double b) {
  if (o.method == "qwalkvec") return qwalkvec(g, WalkParams{a, b, o.t}, o.threads);
  if (o.t < 2) throw usage_error("walk length --t must be >= 2 for random-walk methods");
  auto corpus = o.method == "node2vec" ? biased_walks(g, o.gamma, o.t, BiasParams{a, b}, o.seed, o.threads)
                                       : uniform_walks(g, o.gamma, o.t, o.seed, o.threads);
  if (!o.corpus.empty()) {
    std::ostringstream os;
    write_corpus(corpus, g, os);
    write_file(o.corpus, os.str());
  }
  SkipGramConfig cfg{o.dim, o.window, o.negatives, o.epochs, o.lr, o.seed};
  auto res = train_skipgram(corpus, g.node_count(), cfg);
  res.embedding.node_ids = g.original_ids();
  res.embedding.w_p = o.method == "node2vec" ? a : 1.0;
  res.embedding.w_q = o.method == "node2vec" ? b : 1.0;
  return res.embedding;
}

inline Graph load_graph_file(const std::string& path, std::ostream& diag) {
  load_report rep;
  auto g = load_edge_list(read_file(path), &rep);
  print_load_report(diag, rep);
  return g;
}

inline std::string file_stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

inline int run(std::vector<std::string> args, std::ostream& diag);

namespace detail_cli {

// Expands "--config PATH" into flags placed before the explicit ones, so
// explicit flags win.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> from_config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw usage_error("--config needs a path");
      auto m = RunManifest::parse(read_file(args[++i]));
      if (!m.command.empty() && !rest.empty() && m.command != rest.front())
        throw usage_error("config is for command '" + m.command + "'");
      for (const auto& [k, v] : m.entries) {
        from_config.push_back("--" + k);
        from_config.push_back(v);
      }
    } else if (args[i].rfind("--config=", 0) == 0) {
      throw usage_error("use '--config PATH'");
    } else {
      rest.push_back(args[i]);
    }
  }
  if (from_config.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_config.begin(), from_config.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace detail_cli

inline int run(std::vector<std::string> args, std::ostream& diag) {
  CLI::App app{"QWalkVec: quantum-walk node embeddings, random-walk baselines and evaluation", "qwalkvec"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  EmbedOptions eo;
  auto* embed = app.add_subcommand("embed", "compute an embedding and write it as CSV");
  embed->add_option("--edges", eo.edges, "edge-list file")->required();
  embed->add_option("--method", eo.method, "qwalkvec | deepwalk | node2vec")
      ->check(CLI::IsMember({"qwalkvec", "deepwalk", "node2vec"}));
  embed->add_option("--t", eo.t, "walk length")->required()->check(CLI::PositiveNumber);
  embed->add_option("--seed", eo.seed, "random seed");
  embed->add_option("--out", eo.out, "output CSV")->required();
  add_method_flags(*embed, eo, false);

  std::string emb_path, labels_path, tr_text = "0.2,0.3,0.4,0.5,0.6,0.7,0.8", method_name, dataset;
  std::size_t repeats = 20;
  std::uint64_t eval_seed = 42;
  double reg = 1.0;
  unsigned eval_threads = 1;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "node classification on an embedding");
  evaluate->add_option("--embedding", emb_path, "embedding CSV")->required();
  evaluate->add_option("--labels", labels_path, "label file")->required();
  evaluate->add_option("--tr", tr_text, "comma-separated training ratios");
  evaluate->add_option("--repeats", repeats, "random splits per ratio")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", eval_seed, "random seed");
  evaluate->add_option("--reg", reg, "inverse regularization strength C")->check(CLI::PositiveNumber);
  evaluate->add_option("--method-name", method_name, "method column (default from embedding header)");
  evaluate->add_option("--dataset", dataset, "dataset column (default: label file stem)");
  evaluate->add_option("--threads", eval_threads, "worker threads")->check(CLI::Range(1, 1024));
  evaluate->add_option("--out", eval_out, "report CSV")->required();

  EmbedOptions go;
  std::string grid_text = "0.25,0.5,1,2,4", grid_labels, grid_out, grid_dataset;
  double grid_tr = 0.5;
  std::size_t grid_repeats = 20;
  double grid_reg = 1.0;
  auto* grid = app.add_subcommand("gridsearch", "grid search over (w_p, w_q) or (p, q)");
  grid->add_option("--edges", go.edges, "edge-list file")->required();
  grid->add_option("--labels", grid_labels, "label file")->required();
  grid->add_option("--method", go.method, "qwalkvec | node2vec")->check(CLI::IsMember({"qwalkvec", "node2vec"}));
  grid->add_option("--grid", grid_text, "comma-separated values for both parameters");
  grid->add_option("--t", go.t, "walk length")->required()->check(CLI::PositiveNumber);
  grid->add_option("--tr", grid_tr, "training ratio")->check(CLI::Range(0.0, 1.0));
  grid->add_option("--repeats", grid_repeats, "random splits per cell")->check(CLI::PositiveNumber);
  grid->add_option("--seed", go.seed, "random seed");
  grid->add_option("--reg", grid_reg, "inverse regularization strength C")->check(CLI::PositiveNumber);
  grid->add_option("--dataset", grid_dataset, "dataset column (default: label file stem)");
  grid->add_option("--out", grid_out, "grid table CSV")->required();
  add_method_flags(*grid, go, true);

  std::size_t cycle = 201, tmax = 80;
  std::string spread_out;
  auto* spread = app.add_subcommand("spread", "positional variance of quantum vs classical walks on a cycle");
  spread->add_option("--cycle", cycle, "odd cycle size")->required();
  spread->add_option("--tmax", tmax, "last step")->required()->check(CLI::PositiveNumber);
  spread->add_option("--out", spread_out, "variance CSV")->required();

  std::string replay_manifest;
  auto* replay = app.add_subcommand("replay", "re-run a command from its manifest");
  replay->add_option("--manifest", replay_manifest, "manifest file")->required();

  try {
    args = detail_cli::expand_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    diag << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    diag << tool_version << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    diag << "error: " << e.what() << "\n\n" << app.help();
    return usage_failure;
  } catch (const usage_error& e) {
    diag << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return data_failure;
  }

  try {
    RunManifest manifest;
    std::string out_path;
    if (*replay) {
      auto m = RunManifest::parse(read_file(replay_manifest));
      if (m.command.empty() || m.command == "replay") throw usage_error("manifest names no runnable command");
      std::vector<std::string> again{m.command};
      for (const auto& [k, v] : m.entries) {
        again.push_back("--" + k);
        again.push_back(v);
      }
      return run(again, diag);
    }
    if (*embed) {
      auto g = load_graph_file(eo.edges, diag);
      bool quantum = eo.method == "qwalkvec";
      auto phi = build_embedding(g, eo, quantum ? eo.wp : eo.p, quantum ? eo.wq : eo.q);
      std::ostringstream os;
      write_embedding(phi, os);
      write_file(eo.out, os.str());
      manifest.command = "embed";
      eo.record(manifest);
      manifest.set("out", eo.out);
      out_path = eo.out;
    } else if (*evaluate) {
      auto ratios = parse_list(tr_text, "--tr");
      for (double r : ratios)
        if (!(r > 0.0 && r < 1.0)) throw usage_error("training ratio " + detail::shortest(r) + " outside (0,1)");
      auto phi = read_embedding(read_file(emb_path));
      auto labels = load_labels(read_file(labels_path), phi.node_ids);
      EvalReport rep;
      rep.method = !method_name.empty() ? method_name : (phi.kind == "baseline" ? "baseline" : "qwalkvec");
      rep.dataset = !dataset.empty() ? dataset : file_stem(labels_path);
      rep.params = phi.kind == "baseline" ? grid_params(phi.w_p, phi.w_q, false) + ";d=" + std::to_string(phi.cols)
                                          : grid_params(phi.w_p, phi.w_q, true) + ";t=" + std::to_string(phi.cols);
      rep.seed = eval_seed;
      for (double r : ratios)
        rep.rows.push_back(evaluate_protocol(phi, labels, SplitSpec{r, repeats, eval_seed}, LogRegOptions{reg},
                                             eval_threads));
      std::ostringstream os;
      write_report(os, rep);
      write_file(eval_out, os.str());
      manifest.command = "evaluate";
      manifest.set("embedding", emb_path);
      manifest.set("labels", labels_path);
      manifest.set("tr", join_list(ratios));
      manifest.set("repeats", std::to_string(repeats));
      manifest.set("seed", std::to_string(eval_seed));
      manifest.set("reg", detail::shortest(reg));
      manifest.set("method-name", rep.method);
      manifest.set("dataset", rep.dataset);
      manifest.set("threads", std::to_string(eval_threads));
      manifest.set("out", eval_out);
      out_path = eval_out;
    } else if (*grid) {
      if (!(grid_tr > 0.0 && grid_tr < 1.0)) throw usage_error("--tr must lie in (0,1)");
      auto values = parse_list(grid_text, "--grid");
      for (double v : values)
        if (!(v > 0.0)) throw usage_error("grid values must be positive");
      auto g = load_graph_file(go.edges, diag);
      auto labels = load_labels(read_file(grid_labels), g);
      bool quantum = go.method == "qwalkvec";
      SplitSpec spec{grid_tr, grid_repeats, go.seed};
      auto result = grid_search(
          values, labels, spec, [&](double a, double b) { return build_embedding(g, go, a, b); }, LogRegOptions{grid_reg},
          go.threads);
      std::string ds = !grid_dataset.empty() ? grid_dataset : file_stem(grid_labels);
      std::ostringstream os;
      os << report_csv_header << '\n';
      for (const auto& c : result.cells)
        write_report_row(os, go.method, ds, c.result, grid_params(c.first, c.second, quantum) + ";t=" + std::to_string(go.t),
                         go.seed);
      const auto& best = result.cells[result.best];
      os << "# best " << grid_params(best.first, best.second, quantum) << " micro_mean=" << detail::full_precision(best.result.micro_mean)
         << " macro_mean=" << detail::full_precision(best.result.macro_mean) << '\n';
      write_file(grid_out, os.str());
      manifest.command = "gridsearch";
      manifest.set("edges", go.edges);
      manifest.set("labels", grid_labels);
      manifest.set("method", go.method);
      manifest.set("grid", join_list(values));
      manifest.set("t", std::to_string(go.t));
      manifest.set("tr", detail::shortest(grid_tr));
      manifest.set("repeats", std::to_string(grid_repeats));
      manifest.set("seed", std::to_string(go.seed));
      manifest.set("reg", detail::shortest(grid_reg));
      manifest.set("dataset", ds);
      if (!quantum) {
        manifest.set("gamma", std::to_string(go.gamma));
        manifest.set("window", std::to_string(go.window));
        manifest.set("dim", std::to_string(go.dim));
        manifest.set("negatives", std::to_string(go.negatives));
        manifest.set("epochs", std::to_string(go.epochs));
        manifest.set("lr", detail::shortest(go.lr));
      }
      manifest.set("threads", std::to_string(go.threads));
      manifest.set("out", grid_out);
      out_path = grid_out;
    } else if (*spread) {
      try {
        check_spread_args(cycle, tmax);
      } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
      }
      auto res = spread_variance(cycle, tmax);
      std::ostringstream os;
      os << "t,sigma2_quantum,sigma2_classical\n";
      for (std::size_t t = 0; t <= tmax; ++t)
        os << t << ',' << detail::full_precision(res.sigma2_quantum[t]) << ','
           << detail::full_precision(res.sigma2_classical[t]) << '\n';
      os << "# fit t=[" << res.fit_lo << "," << res.fit_hi << "] exponent_quantum=" << detail::full_precision(res.exponent_quantum)
         << " exponent_classical=" << detail::full_precision(res.exponent_classical) << '\n';
      write_file(spread_out, os.str());
      manifest.command = "spread";
      manifest.set("cycle", std::to_string(cycle));
      manifest.set("tmax", std::to_string(tmax));
      manifest.set("out", spread_out);
      out_path = spread_out;
    }
    write_file(manifest_path(out_path), manifest.str());
    diag << "wrote " << out_path << " and " << manifest_path(out_path) << '\n';
    return ok;
  } catch (const usage_error& e) {
    diag << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const std::invalid_argument& e) {
    diag << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return data_failure;
  }
}

}  // namespace qwalkvec::cli
