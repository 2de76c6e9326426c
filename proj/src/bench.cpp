#include "dcqaoa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dcqaoa {

namespace {

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

const std::vector<std::string> kModels = {"lfim",   "tfim", "ghz",  "ising",
                                          "maxcut", "sk",   "pspin"};

}  // namespace

// ---------------------------------------------------------------- selectors

bool ModelSelector::is_random() const {
  return model == "sk" || (model == "maxcut" && !edges);
}

std::string ModelSelector::label() const {
  if (model == "pspin") {
    return "pspin[P=" + std::to_string(P.value_or(2)) +
           " h=" + fmt_short(h.value_or(0.0)) + "]";
  }
  if (model == "ising") {
    std::string s = "ising[J=" + fmt_short(J.value_or(1.0)) +
                    " hz=" + fmt_short(h_z.value_or(0.0)) +
                    " hx=" + fmt_short(h_x.value_or(0.0));
    if (!periodic) s += " open";
    return s + "]";
  }
  return model;
}

ProblemInstance ModelSelector::instance(
    std::size_t L, std::optional<std::uint64_t> seed) const {
  if (model == "lfim") return lfim(L, J.value_or(1.0), h_z.value_or(1.0));
  if (model == "tfim") return tfim(L, J.value_or(1.0), h_x.value_or(1.0));
  if (model == "ghz") return ghz(L, J.value_or(1.0));
  if (model == "ising") {
    return ising(L, J.value_or(1.0), h_z.value_or(0.0), h_x.value_or(0.0),
                 periodic);
  }
  if (model == "pspin") return pspin(L, P.value_or(2), h.value_or(0.0));
  if (model == "maxcut" && edges) return maxcut(L, *edges);
  if (!seed) throw std::invalid_argument(model + " needs an instance seed");
  if (model == "maxcut") {
    return random_instance(RandomKind::MaxCut3Regular, L, *seed);
  }
  if (model == "sk") return random_instance(RandomKind::SK, L, *seed);
  throw std::invalid_argument("unknown model '" + model + "'");
}

void ExperimentConfig::validate() const {
  if (models.empty()) throw std::invalid_argument("config has no models");
  for (const auto& m : models) {
    if (std::find(kModels.begin(), kModels.end(), m.model) == kModels.end()) {
      throw std::invalid_argument("unknown model '" + m.model + "'");
    }
    if (m.sizes.empty()) {
      throw std::invalid_argument(m.model + " has no sizes");
    }
    if (m.is_random() && instance_seeds.empty()) {
      throw std::invalid_argument(m.model + " needs instance seeds");
    }
  }
  if (variants.empty()) throw std::invalid_argument("config has no variants");
  if (p_values.empty()) throw std::invalid_argument("config has no p values");
  for (auto p : p_values) {
    if (p == 0) throw std::invalid_argument("p must be at least 1");
  }
  if (init_seeds.empty()) throw std::invalid_argument("config has no init seeds");
  optimizer.validate();
}

// --------------------------------------------------------------------- json

namespace {

json optimizer_to_json(const OptimizerConfig& c) {
  json j = {{"method", to_string(c.method)},
            {"learning_rate", c.learning_rate},
            {"momentum", c.momentum},
            {"epsilon", c.epsilon},
            {"max_iterations", c.max_iterations},
            {"gradient_tolerance", c.gradient_tolerance}};
  if (const auto* u = std::get_if<UniformInit>(&c.init)) {
    j["init"] = {{"uniform", {u->lo, u->hi}}};
  } else {
    j["init"] = {{"explicit", std::get<ExplicitInit>(c.init).angles}};
  }
  return j;
}

OptimizerConfig optimizer_from_json(const json& j) {
  const Method m = method_from_string(j.value("method", "adagrad"));
  auto c = OptimizerConfig::defaults(m);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.momentum = j.value("momentum", c.momentum);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.gradient_tolerance = j.value("gradient_tolerance", c.gradient_tolerance);
  if (j.contains("init")) {
    const auto& init = j.at("init");
    if (init.contains("uniform")) {
      const auto range = init.at("uniform").get<std::vector<double>>();
      if (range.size() != 2) {
        throw std::invalid_argument("init.uniform needs [lo, hi]");
      }
      c.init = UniformInit{range[0], range[1]};
    } else if (init.contains("explicit")) {
      c.init = ExplicitInit{init.at("explicit").get<std::vector<double>>()};
    } else {
      throw std::invalid_argument("init needs 'uniform' or 'explicit'");
    }
  }
  return c;
}

json edges_to_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.i, e.j, e.weight});
  return out;
}

std::vector<Edge> edges_from_json(const json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) {
      throw std::invalid_argument("edge must be [i, j] or [i, j, w]");
    }
    out.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                   e.size() == 3 ? e[2].get<double>() : 1.0});
  }
  return out;
}

json selector_to_json(const ModelSelector& m) {
  json j = {{"model", m.model}, {"L", m.sizes}};
  if (m.J) j["J"] = *m.J;
  if (m.h_z) j["h_z"] = *m.h_z;
  if (m.h_x) j["h_x"] = *m.h_x;
  if (!m.periodic) j["periodic"] = false;
  if (m.P) j["P"] = *m.P;
  if (m.h) j["h"] = *m.h;
  if (m.edges) j["edges"] = edges_to_json(*m.edges);
  return j;
}

template <class T>
std::optional<T> opt_field(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

ModelSelector selector_from_json(const json& j) {
  ModelSelector m;
  m.model = j.at("model").get<std::string>();
  const auto& L = j.at("L");
  if (L.is_array()) {
    m.sizes = L.get<std::vector<std::size_t>>();
  } else {
    m.sizes = {L.get<std::size_t>()};
  }
  m.J = opt_field<double>(j, "J");
  m.h_z = opt_field<double>(j, "h_z");
  m.h_x = opt_field<double>(j, "h_x");
  m.periodic = j.value("periodic", true);
  m.P = opt_field<int>(j, "P");
  m.h = opt_field<double>(j, "h");
  if (j.contains("edges")) m.edges = edges_from_json(j.at("edges"));
  return m;
}

std::vector<std::uint64_t> seeds_from_json(const json& j, const char* key) {
  if (j.is_array()) return j.get<std::vector<std::uint64_t>>();
  if (j.is_object()) {
    const auto count = j.at("count").get<std::size_t>();
    const auto start = j.value("start", std::uint64_t{0});
    std::vector<std::uint64_t> out(count);
    std::iota(out.begin(), out.end(), start);
    return out;
  }
  throw std::invalid_argument(std::string(key) +
                              " must be a list or {count, start}");
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(selector_to_json(m));
  json variants = json::array();
  for (auto v : c.variants) variants.push_back(to_string(v));
  json j = {{"name", c.name},
            {"models", models},
            {"variants", variants},
            {"p", c.p_values},
            {"optimizer", optimizer_to_json(c.optimizer)},
            {"instance_seeds", c.instance_seeds},
            {"init_seeds", c.init_seeds},
            {"threads", c.threads},
            {"record_trajectories", c.record_trajectories},
            {"best_of_inits", c.best_of_inits}};
  if (c.cd_shape) j["cd_shape"] = *c.cd_shape;
  if (!c.output.empty()) j["output"] = c.output;
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    c.name = j.value("name", c.name);
    if (j.contains("models")) {
      for (const auto& m : j.at("models")) {
        c.models.push_back(selector_from_json(m));
      }
    } else if (j.contains("model")) {
      c.models.push_back(selector_from_json(j.at("model")));
    }
    if (j.contains("variants")) {
      c.variants.clear();
      for (const auto& v : j.at("variants")) {
        c.variants.push_back(variant_from_string(v.get<std::string>()));
      }
    }
    if (j.contains("p")) {
      const auto& p = j.at("p");
      c.p_values = p.is_array() ? p.get<std::vector<std::size_t>>()
                                : std::vector<std::size_t>{p.get<std::size_t>()};
    }
    if (j.contains("cd_shape")) c.cd_shape = j.at("cd_shape").get<std::string>();
    if (j.contains("optimizer")) {
      c.optimizer = optimizer_from_json(j.at("optimizer"));
    }
    if (j.contains("instance_seeds")) {
      c.instance_seeds = seeds_from_json(j.at("instance_seeds"), "instance_seeds");
    }
    if (j.contains("init_seeds")) {
      c.init_seeds = seeds_from_json(j.at("init_seeds"), "init_seeds");
    }
    c.threads = j.value("threads", c.threads);
    c.record_trajectories = j.value("record_trajectories", false);
    c.best_of_inits = j.value("best_of_inits", false);
    c.output = j.value("output", std::string{});
    if (j.contains("notes")) {
      c.notes = j.at("notes").get<std::map<std::string, std::string>>();
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(const ProblemInstance& inst) {
  json j = {{"L", inst.L}, {"kind", to_string(inst.kind())}};
  if (inst.seed) j["seed"] = *inst.seed;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsingChain>) {
          j["J"] = p.J;
          j["h_z"] = p.h_z;
          j["h_x"] = p.h_x;
          j["periodic"] = p.periodic;
        } else if constexpr (std::is_same_v<T, MaxCutGraph>) {
          j["edges"] = edges_to_json(p.edges);
        } else if constexpr (std::is_same_v<T, SKCouplings>) {
          j["couplings"] = edges_to_json(p.couplings);
        } else {
          j["P"] = p.P;
          j["h"] = p.h;
        }
      },
      inst.params);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  inst.L = j.at("L").get<std::size_t>();
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == to_string(ModelKind::IsingChain)) {
    inst.params = IsingChain{j.at("J").get<double>(), j.at("h_z").get<double>(),
                             j.at("h_x").get<double>(),
                             j.at("periodic").get<bool>()};
  } else if (kind == to_string(ModelKind::MaxCut)) {
    inst.params = MaxCutGraph{edges_from_json(j.at("edges"))};
  } else if (kind == to_string(ModelKind::SK)) {
    inst.params = SKCouplings{edges_from_json(j.at("couplings"))};
  } else if (kind == to_string(ModelKind::PSpin)) {
    inst.params = PSpin{j.at("P").get<int>(), j.at("h").get<double>()};
  } else {
    throw std::invalid_argument("unknown instance kind '" + kind + "'");
  }
  validate(inst);
  return inst;
}

// -------------------------------------------------------------- aggregation

Stats summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty group");
  Stats s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  s.best = *std::max_element(values.begin(), values.end());
  s.single = s.n == 1;
  if (!s.single) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (s.n - 1)) / std::sqrt(double(s.n));
  }
  return s;
}

namespace {

std::string column_value(const ResultRow& r, const std::string& key) {
  if (key == "model") return r.model;
  if (key == "L") return std::to_string(r.L);
  if (key == "variant") return to_string(r.variant);
  if (key == "p") return std::to_string(r.p);
  if (key == "instance_seed") {
    return r.instance_seed ? std::to_string(*r.instance_seed) : "";
  }
  if (key == "init_seed") return std::to_string(r.init_seed);
  throw std::invalid_argument("cannot group by '" + key + "'");
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows,
                                    const std::vector<std::string>& keys) {
  std::vector<std::vector<std::string>> order;
  std::map<std::vector<std::string>, std::vector<double>> groups;
  for (const auto& r : rows) {
    std::vector<std::string> k;
    for (const auto& key : keys) k.push_back(column_value(r, key));
    if (r.failed()) continue;
    auto [it, fresh] = groups.try_emplace(k);
    if (fresh) order.push_back(k);
    it->second.push_back(r.R);
  }
  std::vector<AggregateRow> out;
  for (const auto& k : order) {
    AggregateRow a;
    for (std::size_t i = 0; i < keys.size(); ++i) a.key[keys[i]] = k[i];
    a.stats = summarize(groups.at(k));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<ResultRow> best_over_inits(const std::vector<ResultRow>& rows) {
  const std::vector<std::string> keys = {"model", "L", "variant", "p",
                                         "instance_seed"};
  std::vector<ResultRow> out;
  std::map<std::vector<std::string>, std::size_t> index;
  for (const auto& r : rows) {
    if (r.failed()) continue;
    std::vector<std::string> k;
    for (const auto& key : keys) k.push_back(column_value(r, key));
    const auto [it, fresh] = index.try_emplace(k, out.size());
    if (fresh) {
      out.push_back(r);
    } else if (r.R > out[it->second].R) {
      out[it->second] = r;
    }
  }
  return out;
}

std::size_t ResultTable::failures() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const ResultRow& r) { return r.failed(); });
}

// -------------------------------------------------------------------- sweep

namespace {

struct InstanceJob {
  InstanceJob(const ModelSelector* m, std::size_t size,
              std::optional<std::uint64_t> s)
      : selector(m), L(size), seed(s) {}

  const ModelSelector* selector;
  std::size_t L;
  std::optional<std::uint64_t> seed;
  std::optional<ProblemInstance> instance;
  std::optional<ModelTriple> model;
  double E0 = 0.0;
  std::string error;
};

struct Cell {
  std::size_t job;
  Variant variant;
  std::size_t p;
  std::uint64_t init_seed;
};

void prepare(InstanceJob& job) {
  try {
    job.instance = job.selector->instance(job.L, job.seed);
    job.model = build(*job.instance);
    job.E0 = ground_energy(*job.instance).energy;
  } catch (const std::exception& e) {
    job.error = e.what();
  }
}

ResultRow run_cell(const ExperimentConfig& config, const InstanceJob& job,
                   const Cell& cell) {
  ResultRow row;
  row.model = job.selector->label();
  row.L = job.L;
  row.variant = cell.variant;
  row.p = cell.p;
  row.instance_seed = job.seed;
  row.init_seed = cell.init_seed;
  row.E0 = job.E0;
  try {
    if (!job.error.empty()) throw std::runtime_error(job.error);
    AnsatzSpec spec =
        cell.variant == Variant::QAOA
            ? qaoa_spec(cell.p)
            : dcqaoa_spec(cell.p,
                          config.cd_shape
                              ? cd_operator_from_shape(*job.instance,
                                                       *config.cd_shape)
                              : default_cd_operator(*job.instance));
    auto opt = config.optimizer;
    opt.seed = cell.init_seed;
    const auto t = optimize(spec, *job.model, opt, job.E0);
    row.F = t.final().F;
    row.R = t.final().R;
    row.iterations = t.final().iteration;
    row.depth = depth(spec, *job.model).total;
    row.parameter_count = parameter_count(spec);
    row.status = to_string(t.status);
    row.wall_seconds = t.wall_seconds;
    row.final_params = t.final().params;
    if (config.record_trajectories) {
      for (const auto& r : t.records) {
        row.trajectory.push_back({r.iteration, r.F, r.R, r.gradient_norm});
      }
    }
  } catch (const std::exception& e) {
    row.status = "failed";
    row.error = e.what();
  }
  return row;
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
}

}  // namespace

ResultTable run_sweep(const ExperimentConfig& config,
                      const Progress& progress) {
  config.validate();
  std::vector<InstanceJob> jobs;
  for (const auto& m : config.models) {
    for (auto L : m.sizes) {
      if (m.is_random()) {
        for (auto s : config.instance_seeds) jobs.emplace_back(&m, L, s);
      } else {
        jobs.emplace_back(&m, L, std::nullopt);
      }
    }
  }
  parallel_for(jobs.size(), config.threads,
               [&](std::size_t i) { prepare(jobs[i]); });

  std::vector<Cell> cells;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (auto v : config.variants) {
      for (auto p : config.p_values) {
        for (auto s : config.init_seeds) cells.push_back({j, v, p, s});
      }
    }
  }

  ResultTable table;
  table.rows.resize(cells.size());
  std::mutex mu;
  std::size_t done = 0;
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    table.rows[i] = run_cell(config, jobs[cells[i].job], cells[i]);
    if (progress) {
      std::lock_guard lock(mu);
      progress(++done, cells.size());
    }
  });
  table.aggregates =
      aggregate(config.best_of_inits ? best_over_inits(table.rows) : table.rows,
                {"model", "L", "variant", "p"});
  return table;
}

// --------------------------------------------------------------------- emit

const std::vector<std::string> kRowColumns = {
    "model",  "L",          "variant",         "p",
    "instance_seed", "init_seed", "E0",         "F",
    "R",      "iterations", "depth",           "parameter_count",
    "status", "error",      "final_params"};

Format format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return Format::Csv;
  if (ext == ".jsonl" || ext == ".json") return Format::JsonLines;
  throw std::invalid_argument("cannot infer format from '" + path.string() +
                              "' (use .csv or .jsonl)");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string join_params(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) s += ' ';
    s += fmt12(xs[k]);
  }
  return s;
}

// Rounded to the emitted precision so CSV and JSON-lines agree.
double r12(double x) { return std::stod(fmt12(x)); }

nlohmann::ordered_json row_json(const ResultRow& r) {
  using oj = nlohmann::ordered_json;
  oj params = oj::array();
  for (double x : r.final_params) params.push_back(r12(x));
  return {{"model", r.model},
          {"L", r.L},
          {"variant", to_string(r.variant)},
          {"p", r.p},
          {"instance_seed",
           r.instance_seed ? oj(*r.instance_seed) : oj(nullptr)},
          {"init_seed", r.init_seed},
          {"E0", r12(r.E0)},
          {"F", r12(r.F)},
          {"R", r12(r.R)},
          {"iterations", r.iterations},
          {"depth", r.depth},
          {"parameter_count", r.parameter_count},
          {"status", r.status},
          {"error", r.error},
          {"final_params", params}};
}

std::vector<std::string> row_fields(const ResultRow& r) {
  return {r.model,
          std::to_string(r.L),
          to_string(r.variant),
          std::to_string(r.p),
          r.instance_seed ? std::to_string(*r.instance_seed) : "",
          std::to_string(r.init_seed),
          fmt12(r.E0),
          fmt12(r.F),
          fmt12(r.R),
          std::to_string(r.iterations),
          std::to_string(r.depth),
          std::to_string(r.parameter_count),
          r.status,
          r.error,
          join_params(r.final_params)};
}

ResultRow row_from_fields(const std::vector<std::string>& f) {
  if (f.size() != kRowColumns.size()) {
    throw std::invalid_argument("row has " + std::to_string(f.size()) +
                                " fields, expected " +
                                std::to_string(kRowColumns.size()));
  }
  ResultRow r;
  r.model = f[0];
  r.L = std::stoul(f[1]);
  r.variant = variant_from_string(f[2]);
  r.p = std::stoul(f[3]);
  if (!f[4].empty()) r.instance_seed = std::stoull(f[4]);
  r.init_seed = std::stoull(f[5]);
  r.E0 = std::stod(f[6]);
  r.F = std::stod(f[7]);
  r.R = std::stod(f[8]);
  r.iterations = std::stoul(f[9]);
  r.depth = std::stoul(f[10]);
  r.parameter_count = std::stoul(f[11]);
  r.status = f[12];
  r.error = f[13];
  std::istringstream params(f[14]);
  for (double x; params >> x;) r.final_params.push_back(x);
  return r;
}

ResultRow row_from_json(const json& j) {
  ResultRow r;
  r.model = j.at("model").get<std::string>();
  r.L = j.at("L").get<std::size_t>();
  r.variant = variant_from_string(j.at("variant").get<std::string>());
  r.p = j.at("p").get<std::size_t>();
  if (!j.at("instance_seed").is_null()) {
    r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  }
  r.init_seed = j.at("init_seed").get<std::uint64_t>();
  r.E0 = j.at("E0").get<double>();
  r.F = j.at("F").get<double>();
  r.R = j.at("R").get<double>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.depth = j.at("depth").get<std::size_t>();
  r.parameter_count = j.at("parameter_count").get<std::size_t>();
  r.status = j.at("status").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.final_params = j.at("final_params").get<std::vector<double>>();
  return r;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create " +
                               path.parent_path().string() + ": " +
                               ec.message());
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path sibling(const std::filesystem::path& path,
                              const std::string& suffix) {
  auto out = path;
  out.replace_filename(path.stem().string() + suffix);
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit(const ResultTable& table,
                                        const ExperimentConfig& config,
                                        const std::filesystem::path& path,
                                        Format format) {
  std::vector<std::filesystem::path> written;
  {
    auto out = open_out(path);
    if (format == Format::Csv) {
      for (std::size_t k = 0; k < kRowColumns.size(); ++k) {
        out << (k ? "," : "") << kRowColumns[k];
      }
      out << '\n';
      for (const auto& r : table.rows) {
        const auto f = row_fields(r);
        for (std::size_t k = 0; k < f.size(); ++k) {
          out << (k ? "," : "") << csv_field(f[k]);
        }
        out << '\n';
      }
    } else {
      for (const auto& r : table.rows) out << row_json(r).dump() << '\n';
    }
    finish(out, path);
    written.push_back(path);
  }

  {
    const auto agg = sibling(path, ".aggregate.csv");
    auto out = open_out(agg);
    out << "model,L,variant,p,mean_R,standard_error,N,best_R,single\n";
    for (const auto& a : table.aggregates) {
      for (const char* k : {"model", "L", "variant", "p"}) {
        const auto it = a.key.find(k);
        out << csv_field(it == a.key.end() ? "" : it->second) << ',';
      }
      out << fmt12(a.stats.mean) << ',' << fmt12(a.stats.standard_error)
          << ',' << a.stats.n << ',' << fmt12(a.stats.best) << ','
          << (a.stats.single ? "true" : "false") << '\n';
    }
    finish(out, agg);
    written.push_back(agg);
  }

  const bool any_trajectory =
      std::any_of(table.rows.begin(), table.rows.end(),
                  [](const ResultRow& r) { return !r.trajectory.empty(); });
  if (any_trajectory) {
    const auto tpath = sibling(path, ".trajectories.jsonl");
    auto out = open_out(tpath);
    for (const auto& r : table.rows) {
      for (const auto& t : r.trajectory) {
        using oj = nlohmann::ordered_json;
        out << oj{{"model", r.model},
                  {"L", r.L},
                  {"variant", to_string(r.variant)},
                  {"p", r.p},
                  {"instance_seed",
                   r.instance_seed ? oj(*r.instance_seed) : oj(nullptr)},
                  {"init_seed", r.init_seed},
                  {"iteration", t.iteration},
                  {"F", r12(t.F)},
                  {"R", r12(t.R)},
                  {"gradient_norm", r12(t.gradient_norm)}}
                   .dump()
            << '\n';
      }
    }
    finish(out, tpath);
    written.push_back(tpath);
  }

  {
    auto meta_path = path;
    meta_path += ".meta.json";
    double wall = 0.0;
    for (const auto& r : table.rows) wall += r.wall_seconds;
    const json meta = {
        {"config", to_json(config)},
        {"columns", kRowColumns},
        {"format", format == Format::Csv ? "csv" : "json-lines"},
        {"layer_order", AnsatzSpec::kLayerOrder},
        {"split_order", AnsatzSpec::kSplitOrder},
        {"rows", table.rows.size()},
        {"failures", table.failures()},
        {"optimizer_wall_seconds", wall}};
    auto out = open_out(meta_path);
    out << meta.dump(2) << '\n';
    finish(out, meta_path);
    written.push_back(meta_path);
  }
  return written;
}

std::vector<ResultRow> read_rows(const std::filesystem::path& path,
                                 Format format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t lineno = 0;
  try {
    if (format == Format::Csv) {
      if (!std::getline(in, line)) return rows;
      ++lineno;
      if (csv_split(line) != kRowColumns) {
        throw std::invalid_argument("unexpected header");
      }
      while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty()) rows.push_back(row_from_fields(csv_split(line)));
      }
    } else {
      while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty()) rows.push_back(row_from_json(json::parse(line)));
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                             ": " + e.what());
  }
  return rows;
}

// ------------------------------------------------------------------ figures

std::vector<std::string> figure_names() {
  return {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig4", "fig5"};
}

namespace {

std::vector<std::uint64_t> range_seeds(std::size_t n) {
  std::vector<std::uint64_t> out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<std::size_t> layers(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (auto p = lo; p <= hi; ++p) out.push_back(p);
  return out;
}

ModelSelector selector(std::string model, std::vector<std::size_t> sizes) {
  ModelSelector m;
  m.model = std::move(model);
  m.sizes = std::move(sizes);
  return m;
}

// The Ising-chain figures need a larger step (and, for the degenerate
// cases, a longer budget) than the library defaults to get past the
// shallow plateaus QAOA meets at p = 3.
void tune_chain(ExperimentConfig& c, std::size_t iterations) {
  c.optimizer.learning_rate = 0.1;
  c.optimizer.max_iterations = iterations;
  c.notes["optimizer"] =
      "adagrad eta=0.1, " + std::to_string(iterations) +
      " iterations (chosen; defaults stall below unit R at p=L/2)";
}

}  // namespace

ExperimentConfig figure_config(const std::string& name,
                               std::optional<std::size_t> scale_L) {
  ExperimentConfig c;
  c.name = name;
  c.optimizer = OptimizerConfig::defaults(Method::Adagrad);
  c.init_seeds = range_seeds(10);
  if (name == "fig2a" || name == "fig2b" || name == "fig2c") {
    const char* model = name == "fig2a" ? "lfim" : name == "fig2b" ? "tfim" : "ghz";
    c.models = {selector(model, {12})};
    c.p_values = layers(1, 6);
    tune_chain(c, name == "fig2a" ? 500 : 2000);
    c.notes["protocol"] = "L=12, p=1..6, 10 random initializations";
  } else if (name == "fig3a") {
    c.models = {selector("maxcut", {4, 8, 12})};
    c.p_values = {1};
    c.instance_seeds = range_seeds(10);
    c.init_seeds = range_seeds(5);
    c.best_of_inits = true;
    c.notes["protocol"] = "unweighted 3-regular graphs, 10 instances, p=1";
    c.notes["inits"] = "5 starts per instance (chosen); score an instance "
                       "by its best start";
  } else if (name == "fig3b") {
    c.models = {selector("sk", {6})};
    c.p_values = layers(1, 4);
    c.instance_seeds = range_seeds(10);
    c.init_seeds = range_seeds(5);
    c.best_of_inits = true;
    c.notes["protocol"] = "L=6, 10 instances of J in {-1,1}";
    c.notes["inits"] = "5 starts per instance (chosen); score an instance "
                       "by its best start";
  } else if (name == "fig4") {
    auto h0 = selector("pspin", {6});
    h0.P = 4;
    h0.h = 0.0;
    auto h1 = h0;
    h1.h = 1.0;
    c.models = {h0, h1};
    c.p_values = {1};
    c.record_trajectories = true;
    c.notes["protocol"] = "P=4, h in {0,1}, L=6, p=1, 10 initializations";
  } else if (name == "fig5") {
    auto m = selector("pspin", {6});
    m.P = 3;
    m.h = 1.0;
    c.models = {m};
    c.p_values = layers(1, 3);
    c.notes["protocol"] = "P=3, h=1, L=6, p=1..3, 10 initializations";
  } else {
    throw std::invalid_argument("unknown figure '" + name + "'");
  }
  if (c.notes.find("optimizer") == c.notes.end()) {
    c.notes["optimizer"] = "library defaults (chosen)";
  }
  if (scale_L) {
    for (auto& m : c.models) m.sizes = {*scale_L};
    c.name += "@L=" + std::to_string(*scale_L);
  }
  c.output = "results/" + name + ".csv";
  c.validate();
  return c;
}

}  // namespace dcqaoa
