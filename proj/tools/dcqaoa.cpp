// Command-line front end: pool, exact, solve, sweep, figure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dcqaoa/bench.hpp"

using namespace dcqaoa;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPartial = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelArgs {
  std::string model = "lfim";
  std::size_t L = 4;
  std::optional<double> J, h_z, h_x, h;
  std::optional<int> P;
  bool open = false;
  std::uint64_t instance_seed = 0;

  void add_to(CLI::App* app) {
    app->add_option("--model,-m", model, "lfim|tfim|ghz|ising|maxcut|sk|pspin")
        ->check(CLI::IsMember(
            {"lfim", "tfim", "ghz", "ising", "maxcut", "sk", "pspin"}));
    app->add_option("-L,--size", L, "number of qubits");
    app->add_option("--J", J, "Ising coupling");
    app->add_option("--hz", h_z, "longitudinal field");
    app->add_option("--hx", h_x, "transverse field");
    app->add_flag("--open", open, "open Ising chain instead of a ring");
    app->add_option("--P", P, "P-spin order");
    app->add_option("--field", h, "P-spin transverse field h");
    app->add_option("--instance-seed", instance_seed,
                    "seed for random maxcut/sk instances");
  }

  ModelSelector selector() const {
    ModelSelector m;
    m.model = model;
    m.sizes = {L};
    m.J = J;
    m.h_z = h_z;
    m.h_x = h_x;
    m.periodic = !open;
    m.P = P;
    m.h = h;
    return m;
  }

  ProblemInstance instance() const {
    try {
      return selector().instance(L, instance_seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

std::string fmt(double x, int digits = 10) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

int cmd_pool(const ModelArgs& args, std::size_t order, std::size_t max_weight,
             bool list) {
  const auto inst = args.instance();
  const auto model = build(inst);
  PoolOptions opt;
  opt.order = order;
  opt.max_weight = max_weight;
  const auto pool = agp_pool(model.h_prob, model.h_mixer, opt);
  std::cout << "shapes:";
  for (const auto& s : pool.shapes) std::cout << ' ' << s;
  std::cout << "\nstrings: " << pool.strings.size() << '\n';
  if (list) {
    for (const auto& s : pool.strings) std::cout << "  " << s.letters() << '\n';
  }
  const auto cd = default_cd_operator(inst);
  std::cout << "default cd: " << cd.shape << " (" << cd.terms.size()
            << " terms)\n";
  return kOk;
}

int cmd_exact(const ModelArgs& args) {
  const auto g = ground_energy(args.instance());
  std::cout << "E0 = " << fmt(g.energy, 12) << '\n';
  std::cout << "degeneracy = "
            << (g.degeneracy ? std::to_string(*g.degeneracy) : "unknown")
            << '\n';
  return kOk;
}

struct SolveArgs {
  std::string variant = "dcqaoa";
  std::size_t p = 1;
  std::optional<std::string> cd_shape;
  std::string method = "adagrad";
  std::optional<double> learning_rate;
  std::optional<std::size_t> iterations;
  std::optional<double> tolerance;
  double init_lo = 0.0, init_hi = 0.1;
  std::vector<double> init;
  std::uint64_t seed = 0;
  std::size_t every = 10;
  bool as_json = false;
};

int cmd_solve(const ModelArgs& margs, const SolveArgs& a) {
  const auto inst = margs.instance();
  const auto model = build(inst);
  AnsatzSpec spec;
  OptimizerConfig cfg;
  try {
    const Variant v = variant_from_string(a.variant);
    spec = v == Variant::QAOA
               ? qaoa_spec(a.p)
               : dcqaoa_spec(a.p, a.cd_shape
                                      ? cd_operator_from_shape(inst, *a.cd_shape)
                                      : default_cd_operator(inst));
    cfg = OptimizerConfig::defaults(method_from_string(a.method));
    if (a.learning_rate) cfg.learning_rate = *a.learning_rate;
    if (a.iterations) cfg.max_iterations = *a.iterations;
    if (a.tolerance) cfg.gradient_tolerance = *a.tolerance;
    if (!a.init.empty()) {
      cfg.init = ExplicitInit{a.init};
    } else {
      cfg.init = UniformInit{a.init_lo, a.init_hi};
    }
    cfg.seed = a.seed;
    cfg.validate();
    initial_parameters(spec, cfg);  // size check for explicit angles
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double E0 = ground_energy(inst).energy;
  const auto t = optimize(spec, model, cfg, E0);
  const auto d = depth(spec, model);

  if (a.as_json) {
    for (const auto& r : t.records) {
      std::cout << json{{"iteration", r.iteration},
                        {"F", r.F},
                        {"R", r.R},
                        {"gradient_norm", r.gradient_norm},
                        {"params", r.params}}
                       .dump()
                << '\n';
    }
    std::cout << json{{"status", to_string(t.status)},
                      {"E0", E0},
                      {"wall_seconds", t.wall_seconds},
                      {"depth", d.total},
                      {"parameter_count", parameter_count(spec)},
                      {"instance", to_json(inst)},
                      {"variant", to_string(spec.variant)},
                      {"p", spec.p},
                      {"cd_shape", spec.cd ? spec.cd->shape : ""}}
                     .dump()
              << '\n';
    return kOk;
  }

  std::printf("%8s %16s %12s %12s\n", "iter", "F", "R", "|grad|");
  const std::size_t every = std::max<std::size_t>(1, a.every);
  for (const auto& r : t.records) {
    if (r.iteration % every != 0 && &r != &t.records.back()) continue;
    std::printf("%8zu %16.10f %12.8f %12.4e\n", r.iteration, r.F, r.R,
                r.gradient_norm);
  }
  const auto& f = t.final();
  std::cout << "status: " << to_string(t.status) << '\n'
            << "E0: " << fmt(E0, 12) << '\n'
            << "F: " << fmt(f.F, 12) << "  R: " << fmt(f.R, 12) << '\n'
            << "depth: " << d.total << " (d=" << d.per_layer
            << ", d_cd=" << d.cd_per_layer << ", p=" << spec.p << ")\n"
            << "parameters:";
  for (double x : f.params) std::cout << ' ' << fmt(x, 8);
  std::cout << '\n';
  return kOk;
}

void print_aggregates(const ResultTable& table) {
  std::printf("%-18s %4s %-7s %3s %12s %10s %4s %12s\n", "model", "L",
              "variant", "p", "mean R", "SE", "N", "best R");
  for (const auto& a : table.aggregates) {
    std::printf("%-18s %4s %-7s %3s %12.8f %10.2e %4zu %12.8f\n",
                a.key.at("model").c_str(), a.key.at("L").c_str(),
                a.key.at("variant").c_str(), a.key.at("p").c_str(),
                a.stats.mean, a.stats.standard_error, a.stats.n,
                a.stats.best);
  }
}

int run_and_emit(ExperimentConfig config, const std::string& output,
                 const std::optional<std::string>& format,
                 std::optional<std::size_t> threads, bool quiet) {
  if (threads) config.threads = *threads;
  if (!output.empty()) config.output = output;
  if (config.output.empty()) config.output = "results/" + config.name + ".csv";
  Format f;
  try {
    f = format ? (*format == "csv" ? Format::Csv : Format::JsonLines)
               : format_for(config.output);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Progress progress;
  if (!quiet) {
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu cells", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  }
  const auto table = run_sweep(config, progress);
  const auto written = emit(table, config, config.output, f);
  print_aggregates(table);
  for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  if (table.failures() > 0) {
    std::cerr << table.failures() << " of " << table.rows.size()
              << " cells failed; first error: ";
    for (const auto& r : table.rows) {
      if (r.failed()) {
        std::cerr << r.error << '\n';
        break;
      }
    }
    return kPartial;
  }
  return kOk;
}

std::optional<std::size_t> parse_scale(const std::string& scale) {
  if (scale.empty()) return std::nullopt;
  if (scale.rfind("L=", 0) != 0) {
    throw UsageError("--scale expects L=<size>, got '" + scale + "'");
  }
  try {
    std::size_t used = 0;
    const auto L = std::stoul(scale.substr(2), &used);
    if (used != scale.size() - 2) throw std::invalid_argument(scale);
    return L;
  } catch (const std::logic_error&) {
    throw UsageError("--scale expects L=<size>, got '" + scale + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digitized counterdiabatic QAOA simulator"};
  app.require_subcommand(1);

  ModelArgs model_args;

  auto* pool = app.add_subcommand("pool", "print the nested-commutator CD pool");
  model_args.add_to(pool);
  std::size_t order = 2, max_weight = 2;
  bool list = false;
  pool->add_option("--order,-l", order, "commutator order l");
  pool->add_option("--max-weight", max_weight, "drop longer strings");
  pool->add_flag("--list", list, "print every pooled string");

  auto* exact = app.add_subcommand("exact", "ground energy and degeneracy");
  model_args.add_to(exact);

  auto* solve = app.add_subcommand("solve", "optimize one circuit");
  model_args.add_to(solve);
  SolveArgs sa;
  solve->add_option("--variant", sa.variant, "qaoa|dcqaoa");
  solve->add_option("-p,--layers", sa.p, "number of layers");
  solve->add_option("--cd-shape", sa.cd_shape, "override the CD shape");
  solve->add_option("--method", sa.method, "adagrad|momentum");
  solve->add_option("--lr", sa.learning_rate, "learning rate");
  solve->add_option("--iters", sa.iterations, "iteration budget");
  solve->add_option("--tol", sa.tolerance, "gradient-norm tolerance");
  solve->add_option("--init-lo", sa.init_lo, "uniform init lower bound");
  solve->add_option("--init-hi", sa.init_hi, "uniform init upper bound");
  solve->add_option("--init", sa.init, "explicit flat angles")->expected(-1);
  solve->add_option("--seed", sa.seed, "initialization seed");
  solve->add_option("--every", sa.every, "print every n-th iteration");
  solve->add_flag("--json", sa.as_json, "JSON lines output");

  auto* sweep = app.add_subcommand("sweep", "run an experiment config file");
  std::string config_path, output;
  std::optional<std::string> format;
  std::optional<std::size_t> threads;
  bool quiet = false;
  sweep->add_option("config", config_path, "JSON config")->required();

  auto* figure = app.add_subcommand("figure", "run a built-in figure config");
  std::string figure_name, scale;
  figure->add_option("name", figure_name, "figure name")
      ->required()
      ->check(CLI::IsMember(figure_names()));
  figure->add_option("--scale", scale, "reduced size, e.g. L=8");

  for (auto* sub : {sweep, figure}) {
    sub->add_option("--output,-o", output, "row file (.csv or .jsonl)");
    sub->add_option("--format", format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
    sub->add_flag("--quiet,-q", quiet, "no progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*pool) return cmd_pool(model_args, order, max_weight, list);
    if (*exact) return cmd_exact(model_args);
    if (*solve) return cmd_solve(model_args, sa);
    if (*sweep) {
      ExperimentConfig config;
      try {
        config = load_config(config_path);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return run_and_emit(config, output, format, threads, quiet);
    }
    if (*figure) {
      auto config = figure_config(figure_name, parse_scale(scale));
      if (output.empty() && !scale.empty()) {
        output = "results/" + figure_name + "_" + scale.substr(0, 1) +
                 scale.substr(2) + ".csv";
      }
      return run_and_emit(config, output, format, threads, quiet);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPartial;
  }
  return kUsage;
}
