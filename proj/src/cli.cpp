#include "looptree/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>

#include "looptree/ensemble.hpp"
#include "looptree/estimate.hpp"
#include "looptree/gf.hpp"
#include "looptree/io.hpp"
#include "looptree/loopspine.hpp"
#include "looptree/looptree.hpp"
#include "looptree/resistance.hpp"
#include "looptree/trees.hpp"
#include "looptree/verify.hpp"
#include "looptree/walk.hpp"

namespace looptree {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DistOptions {
  std::string name = "slack";
  double alpha = 1.5;
  double c = 0.5;
  std::string table;
};

struct Common {
  DistOptions dist;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

void add_dist(CLI::App* cmd, Common& c) {
  cmd->add_option("--dist", c.dist.name, "slack | geometric | chain | table")
      ->check(CLI::IsMember({"slack", "geometric", "chain", "table"}));
  cmd->add_option("--alpha", c.dist.alpha, "slack tail index in (1, 2]");
  cmd->add_option("--c", c.dist.c, "slack constant in (0, 1/alpha]");
  cmd->add_option("--table", c.dist.table, "law file, one probability per line");
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "64-bit seed");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "worker threads (default LOOPTREE_THREADS or all cores)");
}

OffspringDistribution build_dist(const DistOptions& d) {
  if (d.name == "slack") return make_slack(d.alpha, d.c);
  if (d.name == "geometric") return make_geometric_half();
  if (d.name == "chain") return make_tabulated({0.0, 1.0});
  if (d.table.empty()) throw UsageError("--dist table needs --table FILE");
  return make_tabulated(read_law_table(d.table));
}

json config_echo(const std::string& command, const Common& c, json extra) {
  json cfg;
  cfg["command"] = command;
  cfg["dist"] = c.dist.name;
  if (c.dist.name == "slack") {
    cfg["alpha"] = c.dist.alpha;
    cfg["c"] = c.dist.c;
  }
  if (c.dist.name == "table") cfg["table"] = c.dist.table;
  cfg["seed"] = c.seed;
  for (auto& [k, v] : extra.items()) cfg[k] = v;
  return cfg;
}

// Destination stream: the --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Rows as CSV (header first) or as one JSON object {config, rows, summary}.
void emit_table(std::ostream& os, const std::string& format, const std::vector<std::string>& columns,
                const std::vector<std::vector<json>>& rows, const json& config, const json& summary = json()) {
  if (format == "json") {
    json doc;
    doc["config"] = config;
    json arr = json::array();
    for (const auto& row : rows) {
      json obj;
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      arr.push_back(obj);
    }
    doc["rows"] = arr;
    if (!summary.is_null()) doc["summary"] = summary;
    os << doc.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
}

json fit_json(const ExponentFit& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"stderr", f.std_error},
              {"window", json::array({f.window.lo, f.window.hi})},
              {"points", f.points}};
}

std::vector<std::uint32_t> dyadic(std::uint32_t lo_exp, std::uint32_t hi_exp) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t e = lo_exp; e <= hi_exp; ++e) v.push_back(std::uint32_t{1} << e);
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random infinite looptrees: sampling, random walks, resistance and exponent estimates"};
  app.require_subcommand(1);
  Common c;

  auto* sample_tree = app.add_subcommand("sample-tree", "Galton-Watson tree as depth-first outdegrees");
  std::size_t tree_size = 0, tree_count = 1, tree_cap = 1000000;
  add_dist(sample_tree, c);
  add_output(sample_tree, c);
  sample_tree->add_option("--size", tree_size, "condition on this many vertices (0 = unconditioned)");
  sample_tree->add_option("--count", tree_count, "number of trees");
  sample_tree->add_option("--cap", tree_cap, "vertex cap for unconditioned trees");

  auto* loop = app.add_subcommand("loop", "Loop transform of a tree given as outdegrees");
  std::string tree_text;
  add_output(loop, c);
  loop->add_option("--tree", tree_text, "comma-separated depth-first outdegrees, e.g. 2,0,0")->required();

  auto* ball_cmd = app.add_subcommand("ball", "Export the ball B(R) of the infinite looptree");
  std::uint32_t radius = 8;
  add_dist(ball_cmd, c);
  add_output(ball_cmd, c);
  ball_cmd->add_option("--radius", radius, "ball radius R (vertices at distance < R)");

  auto* walk = app.add_subcommand("walk", "Exact return probabilities p_2n at the root");
  std::uint32_t n_max = 64;
  add_dist(walk, c);
  add_output(walk, c);
  walk->add_option("--nmax", n_max, "largest n");

  auto* escape = app.add_subcommand("escape", "Exact and Monte Carlo escape time from B(R)");
  std::uint32_t escape_radius = 16;
  std::size_t walks = 1000;
  add_dist(escape, c);
  add_output(escape, c);
  escape->add_option("--radius", escape_radius, "R");
  escape->add_option("--walks", walks, "Monte Carlo walks");

  auto* resistance = app.add_subcommand("resistance", "Effective resistance and separator bound");
  std::vector<std::uint32_t> levels{8, 16, 32};
  add_dist(resistance, c);
  add_output(resistance, c);
  resistance->add_option("--levels", levels, "levels n")->delimiter(',');

  auto* volume = app.add_subcommand("volume", "Mean ball volume E|B(n)| over realizations");
  std::vector<std::uint32_t> radii = dyadic(2, 8);
  std::size_t realizations = 20;
  add_dist(volume, c);
  add_output(volume, c);
  volume->add_option("--radii", radii, "radii n")->delimiter(',');
  volume->add_option("--realizations", realizations, "independent realizations");

  auto* gf = app.add_subcommand("gf", "E(X^(n)) recursion and the constant M");
  std::uint32_t gf_n_max = 1024;
  add_dist(gf, c);
  add_output(gf, c);
  gf->add_option("--nmax", gf_n_max, "largest n");

  auto* ds = app.add_subcommand("estimate-ds", "Spectral dimension estimate");
  std::string mode = "quenched", points_path;
  std::uint32_t ds_n_max = 256;
  std::size_t ds_realizations = 10;
  std::optional<double> window_lo, window_hi;
  add_dist(ds, c);
  add_output(ds, c);
  ds->add_option("--mode", mode, "quenched | annealed")->check(CLI::IsMember({"quenched", "annealed"}));
  ds->add_option("--nmax", ds_n_max, "largest n");
  ds->add_option("--realizations", ds_realizations, "realizations (annealed)");
  ds->add_option("--window-lo", window_lo, "smallest n in the fit");
  ds->add_option("--window-hi", window_hi, "largest n in the fit");
  ds->add_option("--points", points_path, "write the (n, p2n) points here");

  auto* verify = app.add_subcommand("verify", "Small-case oracles and property checks");
  bool quick = false;
  verify->add_flag("--quick", quick, "smaller sample sizes");

  std::vector<const char*> argv{"looptree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c.threads) set_thread_override(c.threads);
    if (*verify) return run_verify(quick, out) == 0 ? 0 : 1;

    Sink sink(c.out, out);
    std::ostream& os = *sink;

    if (*loop) {
      const PlaneTree tree = parse_tree(tree_text);
      const Looptree g = loop_transform(tree);
      const auto dist = g.bfs_distances();
      std::vector<std::vector<json>> rows;
      for (const auto& e : g.edge_list()) rows.push_back({e.u, e.v, e.multiplicity, dist[e.u], dist[e.v]});
      emit_table(os, c.format, {"u", "v", "multiplicity", "distance_u", "distance_v"}, rows,
                 config_echo("loop", c, {{"tree", tree_text}}), json{{"height", loop_height(g)}});
      return 0;
    }

    const OffspringDistribution dist = build_dist(c.dist);
    if (*sample_tree) {
      Rng rng = Rng::substream(c.seed, 0);
      std::vector<std::vector<json>> rows;
      for (std::size_t i = 0; i < tree_count; ++i) {
        const PlaneTree t = tree_size ? sample_gw_conditioned(dist, tree_size, rng, 100000000)
                                      : sample_gw(dist, rng, tree_cap);
        rows.push_back({i, t.size(), height(t), to_string(t)});
      }
      emit_table(os, c.format, {"index", "size", "height", "outdegrees"}, rows,
                 config_echo("sample-tree", c, {{"size", tree_size}, {"count", tree_count}}));
    } else if (*ball_cmd) {
      if (radius < 1) throw UsageError("--radius must be >= 1");
      Rng rng = Rng::substream(c.seed, 0);
      write_ball(os, generate_loopspine_ball(dist, radius, rng), c.seed);
    } else if (*walk) {
      Rng rng = Rng::substream(c.seed, 0);
      const LoopspineBall b = generate_loopspine_ball(dist, 2 * n_max + 1, rng);
      const auto rp = return_probabilities(b, n_max, true);
      std::vector<std::vector<json>> rows;
      for (std::uint32_t n = 0; n <= n_max; ++n) rows.push_back({n, rp.p[n]});
      emit_table(os, c.format, {"n", "p2n"}, rows, config_echo("walk", c, {{"nmax", n_max}}),
                 json{{"ball_vertices", b.size()}, {"max_mass_error", rp.max_mass_error}});
    } else if (*escape) {
      if (escape_radius < 1) throw UsageError("--radius must be >= 1");
      Rng rng = Rng::substream(c.seed, 0);
      const LoopspineBall b = generate_loopspine_ball(dist, escape_radius + 1, rng);
      const auto exact = expected_escape_time(b, escape_radius);
      const auto mc = sample_escape_time(b, escape_radius, walks, rng);
      emit_table(os, c.format, {"R", "T_R", "mc_mean", "mc_stderr"},
                 {{escape_radius, exact.root, mc.mean, mc.std_error}},
                 config_echo("escape", c, {{"radius", escape_radius}, {"walks", walks}}));
    } else if (*resistance) {
      if (levels.empty()) throw UsageError("--levels is empty");
      const std::uint32_t top = *std::max_element(levels.begin(), levels.end());
      Rng rng = Rng::substream(c.seed, 0);
      const LoopspineBall b = generate_loopspine_ball(dist, top + 1, rng);
      std::vector<std::vector<json>> rows;
      for (std::uint32_t n : levels) {
        if (n < 2) throw UsageError("levels must be >= 2");
        const auto r = effective_resistance(b, n);
        const auto sep = find_separator(b, n);
        rows.push_back({n, r.value, sep.distance, sep.distance / 2.0, to_string(sep.kind)});
      }
      emit_table(os, c.format, {"n", "Reff", "Dn", "lower", "case"}, rows,
                 config_echo("resistance", c, {{"levels", levels}}));
    } else if (*volume) {
      if (radii.empty()) throw UsageError("--radii is empty");
      const auto est = estimate_volume_exponent(dist, realizations, radii, c.seed);
      std::vector<std::vector<json>> rows;
      for (std::size_t j = 0; j < est.n.size(); ++j)
        rows.push_back({est.n[j], est.mean[j], est.std_error[j], est.ratio.empty() ? json() : json(est.ratio[j])});
      emit_table(os, c.format, {"n", "mean_volume", "stderr", "volume_over_a_n"}, rows,
                 config_echo("volume", c, {{"radii", radii}, {"realizations", realizations}}),
                 json{{"fit", fit_json(est.fit)}, {"theory", dist.alpha()}});
    } else if (*gf) {
      const auto ex = expected_outgrowth_volume(dist, gf_n_max);
      const double m = m_constant(dist);
      std::vector<std::vector<json>> rows;
      for (std::uint32_t n = 0; n <= gf_n_max; ++n)
        rows.push_back({n, ex[n], n == 0 || dist.l_const() <= 0.0 ? json() : json(ex[n] * n / scaling_a(dist, n)), m});
      emit_table(os, c.format, {"n", "EXn", "EXn_n_over_a_n", "M"}, rows, config_echo("gf", c, {{"nmax", gf_n_max}}));
    } else if (*ds) {
      std::optional<FitWindow> window;
      if (window_lo || window_hi) window = FitWindow{window_lo.value_or(1.0), window_hi.value_or(ds_n_max)};
      const DsEstimate est = mode == "quenched"
                                 ? estimate_ds_quenched(dist, c.seed, ds_n_max, window)
                                 : estimate_ds_annealed(dist, ds_realizations, ds_n_max, c.seed, window);
      json summary{{"alpha", dist.alpha()},
                   {"mode", mode},
                   {"ds_fit", est.ds},
                   {"ds_theory", est.theory},
                   {"stderr", est.ds_std_error},
                   {"window", json::array({est.fit.window.lo, est.fit.window.hi})},
                   {"points", est.fit.points}};
      json cfg = config_echo("estimate-ds", c, {{"mode", mode}, {"nmax", ds_n_max}});
      if (mode == "annealed") cfg["realizations"] = ds_realizations;
      if (c.format == "json") {
        os << json{{"config", cfg}, {"summary", summary}}.dump(2) << "\n";
      } else {
        os << "alpha,mode,ds_fit,ds_theory,stderr,window_lo,window_hi\n"
           << format_double(dist.alpha()) << ',' << mode << ',' << format_double(est.ds) << ','
           << format_double(est.theory) << ',' << format_double(est.ds_std_error) << ','
           << format_double(est.fit.window.lo) << ',' << format_double(est.fit.window.hi) << "\n";
      }
      if (!points_path.empty()) {
        std::ofstream pf(points_path);
        if (!pf) throw UsageError("cannot open points file " + points_path);
        pf << "n," << (mode == "quenched" ? "p2n" : "mean_p2n") << "\n";
        for (const auto& [n, p] : est.points) pf << format_double(n) << ',' << format_double(p) << "\n";
      }
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    err << "resource error: " << e.what() << "\n";
    return 1;
  } catch (const AttemptsExhausted& e) {
    err << "sampling error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace looptree
