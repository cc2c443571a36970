#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "levynet/brownian_map.hpp"
#include "levynet/characterization.hpp"
#include "levynet/config.hpp"
#include "levynet/csbp.hpp"
#include "levynet/error.hpp"
#include "levynet/levy_net.hpp"
#include "levynet/serialize.hpp"
#include "levynet/stable_forest.hpp"
#include "levynet/stable_levy.hpp"
#include "levynet/suites.hpp"

namespace {

using namespace levynet;
using json = nlohmann::json;

struct Common {
  std::uint64_t seed = 42;
  std::optional<std::size_t> n;
  std::optional<double> alpha;
  std::string out;
  unsigned jobs = 1;
  std::string config;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "root seed");
  app->add_option("--n", c.n, "sample size");
  app->add_option("--alpha", c.alpha, "stability index in (1,2)");
  app->add_option("--out", c.out, "output file (simulate/compute) or directory (verify)");
  app->add_option("--jobs", c.jobs, "worker threads, 0 = all cores");
  app->add_option("--config", c.config, "flat JSON config file")->check(CLI::ExistingFile);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write '" + out + "'");
  f << text;
}

void emit(const std::string& out, const json& j) { emit(out, j.dump(2) + "\n"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levynet: stable Levy, CSBP, Levy net and Brownian map toolkit"};
  app.require_subcommand(1);
  Common c;

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample an object and write it as JSON");
  sim->require_subcommand(1);
  double duration = 1.0, dt = 1e-3, y0 = 1.0, horizon = 1.0, h = csbp::kDefaultStep;
  std::string variant = "gaussian";
  auto* sim_stable = sim->add_subcommand("stable", "spectrally positive stable path");
  sim_stable->add_option("--duration", duration);
  sim_stable->add_option("--dt", dt);
  auto* sim_csbp = sim->add_subcommand("csbp", "stable CSBP by Lamperti time change");
  sim_csbp->add_option("--y0", y0);
  sim_csbp->add_option("--horizon", horizon);
  sim_csbp->add_option("--step", h, "Lamperti step in CSBP time");
  auto* sim_forest = sim->add_subcommand("forest", "size-conditioned stable tree");
  auto* sim_net = sim->add_subcommand("levynet", "Levy net skeleton of a size-conditioned tree (JSON lines)");
  auto* sim_snake = sim->add_subcommand("snake", "Brownian snake");
  sim_snake->add_option("--variant", variant)->check(CLI::IsMember({"gaussian", "lattice"}));
  for (auto* s : {sim_stable, sim_csbp, sim_forest, sim_net, sim_snake}) add_common(s, c);

  // compute
  auto* comp = app.add_subcommand("compute", "evaluate closed forms and deterministic quantities");
  comp->require_subcommand(1);
  bool grid = false;
  double lambda = 1.0, t = 1.0;
  std::size_t points = 64;
  auto* c_ia = comp->add_subcommand("i-alpha", "I_alpha by closed form, four-term form and quadrature");
  c_ia->add_flag("--grid", grid, "17-point grid on [1.1, 1.9]");
  auto* c_root = comp->add_subcommand("root", "zero of I_alpha on (1.1, 1.9)");
  auto* c_lap = comp->add_subcommand("csbp-laplace", "E exp(-lambda Y_t) for the stable CSBP");
  c_lap->add_option("--y0", y0);
  c_lap->add_option("--lambda", lambda);
  c_lap->add_option("--t", t);
  auto* c_ext = comp->add_subcommand("extinction", "extinction law of the stable CSBP");
  c_ext->add_option("--y0", y0);
  c_ext->add_option("--t", t);
  auto* c_met = comp->add_subcommand("metric", "d-circ and its metric closure on a sampled snake");
  c_met->add_option("--points", points);
  c_met->add_option("--variant", variant)->check(CLI::IsMember({"gaussian", "lattice"}));
  for (auto* s : {c_ia, c_root, c_lap, c_ext, c_met}) add_common(s, c);

  // verify
  auto* ver = app.add_subcommand("verify", "run an acceptance suite and write a report");
  std::string suite;
  double r = 0.0, eps = 0.0;
  ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(harness::suite_names()));
  ver->add_option("--r", r, "drift horizon");
  ver->add_option("--eps", eps, "drift truncation");
  add_common(ver, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const double alpha = c.alpha.value_or(1.5);
    Rng rng = Rng::for_stream(c.seed, 0);

    if (*sim) {
      if (*sim_stable) {
        stable_levy::PathScheme scheme;
        scheme.grid_dt = dt;
        emit(c.out, io::to_json(stable_levy::sample_path(alpha, 0.0, duration, scheme, rng)));
      } else if (*sim_csbp) {
        emit(c.out, io::to_json(csbp::simulate(alpha, y0, horizon, h, rng)));
      } else if (*sim_forest || *sim_net) {
        const auto law = stable_forest::offspring_law(alpha);
        const auto tree = stable_forest::sample_conditioned_tree(law, c.n.value_or(10'000), rng);
        if (*sim_forest) {
          emit(c.out, io::to_json(tree));
        } else {
          std::ostringstream s;
          io::write_skeleton_jsonl(s, levy_net::skeleton_from_profile(tree));
          emit(c.out, s.str());
        }
      } else if (*sim_snake) {
        const std::size_t n = c.n.value_or(1024);
        emit(c.out, io::to_json(variant == "gaussian" ? brownian_map::sample_gaussian_snake(n, rng)
                                                      : brownian_map::sample_discrete_snake(n, rng)));
      }
      return 0;
    }

    if (*comp) {
      if (*c_ia) {
        json rows = json::array();
        auto row = [](double a) {
          return json{{"alpha", a},
                      {"closed", characterization::i_alpha_closed(a)},
                      {"four_term", characterization::i_alpha_four_term(a)},
                      {"quadrature", characterization::i_alpha_quadrature(a)}};
        };
        if (grid)
          for (int i = 0; i < 17; ++i) rows.push_back(row(1.1 + 0.05 * i));
        else
          rows.push_back(row(alpha));
        emit(c.out, rows);
      } else if (*c_root) {
        emit(c.out, json{{"closed", characterization::find_martingale_alpha(1e-12)},
                         {"quadrature", characterization::find_martingale_alpha(
                                            1e-12, characterization::IMethod::quadrature)}});
      } else if (*c_lap) {
        emit(c.out, json{{"alpha", alpha},
                         {"y0", y0},
                         {"lambda", lambda},
                         {"t", t},
                         {"u_t", csbp::u_lambda(alpha, lambda, t)},
                         {"laplace", csbp::laplace(alpha, y0, lambda, t)}});
      } else if (*c_ext) {
        emit(c.out, json{{"alpha", alpha},
                         {"y0", y0},
                         {"t", t},
                         {"survival", csbp::extinction_tail(alpha, y0, t)},
                         {"cdf", csbp::extinction_cdf(alpha, y0, t)}});
      } else if (*c_met) {
        const std::size_t n = c.n.value_or(1024);
        const auto snake = variant == "gaussian" ? brownian_map::sample_gaussian_snake(n, rng)
                                                 : brownian_map::sample_discrete_snake(n, rng);
        const auto pts = brownian_map::select_points(snake, std::min(points, snake.n + 1), rng);
        emit(c.out, io::to_json(brownian_map::compute_metric(snake, pts, c.jobs)));
      }
      return 0;
    }

    harness::RunConfig cfg;
    if (!c.config.empty()) cfg = harness::load_config(c.config, cfg);
    if (ver->count("--seed")) cfg.seed = c.seed;
    if (ver->count("--jobs")) cfg.jobs = c.jobs;
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (suite == "drift") {
      if (c.n) cfg.drift_paths = *c.n;
      if (c.alpha) cfg.drift_alphas = {*c.alpha};
      if (r > 0.0) cfg.drift_r = r;
      if (eps > 0.0) cfg.drift_eps = eps;
    }
    harness::validate(cfg);
    const auto report = harness::run_suite(suite, cfg, [](const harness::TestRecord& rec) {
      std::fprintf(stderr, "%-4s %-8s %s (%.1fs)\n", rec.id.c_str(), harness::verdict_name(rec.verdict),
                   rec.title.c_str(), rec.runtime_s);
    });
    harness::write_report(report, cfg.out_dir);
    std::fprintf(stderr, "report written to %s\n", cfg.out_dir.c_str());
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
