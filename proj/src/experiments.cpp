#include "gnoc/experiments.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "gnoc/workload.hpp"

namespace gnoc {

std::string Csv::str() const {
  std::ostringstream os;
  os << header << "\n";
  for (const std::string& r : rows) os << r << "\n";
  return os.str();
}

void Csv::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << str();
}

void parallel_for_ordered(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int workers = std::min(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

namespace {

std::string fmt_ratio(double v) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::vector<RoundPlan> single_row_job(const NetworkConfig& cfg) {
  RoundPlan p;
  p.round = 0;
  p.row_begin = 0;
  p.row_end = 1;
  p.col_begin = 0;
  p.col_end = cfg.mesh_cols;
  p.active_filter_slots = cfg.mesh_cols * cfg.pes_per_router;
  return {p};
}

std::vector<LayerShape> smoke_subset(const std::string& model) {
  std::vector<LayerShape> all = resolve_model(model);
  if (all.size() <= 3) return all;
  return {all.front(), all[all.size() / 2], all.back()};
}

Csv exp_delta_sweep(int mesh, uint64_t seed) {
  Csv csv;
  csv.header = csv_header();
  SimOptions opts;
  opts.seed = seed;
  opts.audit_payloads = false;
  for (int n : {1, 2, 4, 8}) {
    NetworkConfig base;
    base.mesh_rows = mesh;
    base.mesh_cols = mesh;
    base.pes_per_router = n;
    base.apply_defaults();
    const int kappa = base.pipeline_depth;
    std::vector<long long> deltas{kappa - 1};
    for (int m = 1; m <= mesh - 1; ++m) deltas.push_back((long long)m * kappa);
    deltas.push_back(10LL * kappa);

    SimReport baseline;
    double base_energy = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
      NetworkConfig cfg = base;
      cfg.delta = deltas[i];
      SimReport r = run_plans(cfg, single_row_job(cfg), opts, "row_job");
      if (i == 0) {
        baseline = r;
        base_energy = energy(baseline);
      }
      double lat_norm = double(baseline.net_cycles) / double(r.net_cycles);
      double en_norm = base_energy / energy(r);
      char id[64];
      snprintf(id, sizeof id, "delta_sweep/n=%d/delta=%lld", n, deltas[i]);
      csv.rows.push_back(csv_row(id, "gather", cfg, r, {}, lat_norm, en_norm));
    }
  }
  return csv;
}

Csv exp_packet_size(uint64_t seed) {
  Csv csv;
  csv.header = csv_header();
  SimOptions opts;
  opts.seed = seed;
  opts.audit_payloads = false;
  for (int mesh : {8, 16}) {
    for (int n : {1, 2, 4, 8}) {
      NetworkConfig base;
      base.mesh_rows = mesh;
      base.mesh_cols = mesh;
      base.pes_per_router = n;
      base.apply_defaults();

      NetworkConfig ru = base;
      ru.result_mode = ResultMode::RepetitiveUnicast;
      SimReport r_ru = run_plans(ru, single_row_job(ru), opts, "row_job");
      double e_ru = energy(r_ru);

      // One packet sized for the whole row, then the half-size variant
      // (the table default covers 8 columns, i.e. two packets on 16).
      int ppf = base.payloads_per_flit();
      NetworkConfig one = base;
      one.gather_len = 1 + (mesh * n + ppf - 1) / ppf;
      NetworkConfig two = base;
      two.gather_len = 1 + (mesh * n / 2 + ppf - 1) / ppf;

      for (auto [tag, cfg] : {std::pair<const char*, NetworkConfig>{"one_large", one},
                              {"two_small", two}}) {
        SimReport r = run_plans(cfg, single_row_job(cfg), opts, "row_job");
        char id[64];
        snprintf(id, sizeof id, "packet_size/%dx%d/n=%d/%s", mesh, mesh, n, tag);
        csv.rows.push_back(csv_row(id, "gather", cfg, r, {},
                                   double(r_ru.net_cycles) / double(r.net_cycles),
                                   e_ru / energy(r)));
      }
    }
  }
  return csv;
}

Csv exp_main_comparison(const std::string& model, bool smoke, int jobs, uint64_t seed) {
  std::vector<LayerShape> layers = smoke ? smoke_subset(model) : resolve_model(model);
  struct Point {
    int mesh;
    int n;
  };
  std::vector<Point> points;
  for (int mesh : {8, 16}) {
    for (int n : {1, 2, 4, 8}) points.push_back({mesh, n});
  }
  struct Done {
    NetworkConfig g, ru;
    SimReport rg, rru;
  };
  std::vector<Done> res(points.size());
  parallel_for_ordered(int(points.size()), jobs, [&](int i) {
    NetworkConfig g;
    g.mesh_rows = points[i].mesh;
    g.mesh_cols = points[i].mesh;
    g.pes_per_router = points[i].n;
    g.apply_defaults();
    NetworkConfig ru = g;
    ru.result_mode = ResultMode::RepetitiveUnicast;
    SimOptions opts;
    opts.seed = seed;
    opts.audit_payloads = false;
    res[i] = Done{g, ru, run_network(g, layers, opts), run_network(ru, layers, opts)};
  });

  Csv csv;
  csv.header = csv_header();
  for (size_t i = 0; i < points.size(); ++i) {
    const Done& d = res[i];
    auto [lat, en] = improvement_ratios(d.rru, d.rg, {}, LatencyMetric::Net);
    char id[96];
    snprintf(id, sizeof id, "compare/%s%s/%dx%d/n=%d", model.c_str(), smoke ? "-smoke" : "",
             points[i].mesh, points[i].mesh, points[i].n);
    csv.rows.push_back(csv_row(std::string(id) + "/ru", "repetitive_unicast", d.ru, d.rru,
                               {}, 1.0, 1.0));
    csv.rows.push_back(csv_row(std::string(id) + "/gather", "gather", d.g, d.rg, {}, lat, en));
  }
  return csv;
}

Csv exp_streaming_modes(const std::string& model, int mesh, int pes, bool smoke, int jobs,
                        uint64_t seed) {
  std::vector<LayerShape> layers = smoke ? smoke_subset(model) : resolve_model(model);
  struct Done {
    SimReport two, one, none;
    NetworkConfig cfg_two, cfg_one, cfg_none;
  };
  std::vector<Done> res(layers.size());
  parallel_for_ordered(int(layers.size()), jobs, [&](int i) {
    NetworkConfig base;
    base.mesh_rows = mesh;
    base.mesh_cols = mesh;
    base.pes_per_router = pes;
    base.apply_defaults();
    SimOptions opts;
    opts.seed = seed;
    opts.audit_payloads = false;
    Done d;
    d.cfg_two = base;
    d.cfg_one = base;
    d.cfg_one.streaming_mode = StreamingMode::OneWay;
    d.cfg_none = base;
    d.cfg_none.streaming_mode = StreamingMode::None;
    d.two = run_layer(d.cfg_two, layers[i], opts);
    d.one = run_layer(d.cfg_one, layers[i], opts);
    d.none = run_layer(d.cfg_none, layers[i], opts);
    res[i] = std::move(d);
  });

  Csv csv;
  csv.header = csv_header();
  for (size_t i = 0; i < layers.size(); ++i) {
    const Done& d = res[i];
    auto two = improvement_ratios(d.none, d.two, {}, LatencyMetric::Wall);
    auto one = improvement_ratios(d.none, d.one, {}, LatencyMetric::Wall);
    std::string base_id = "streams/" + model + "/" + layers[i].name;
    csv.rows.push_back(
        csv_row(base_id + "/none", "none", d.cfg_none, d.none, {}, 1.0, 1.0));
    csv.rows.push_back(csv_row(base_id + "/one_way", "one_way", d.cfg_one, d.one, {},
                               one.first, one.second));
    csv.rows.push_back(csv_row(base_id + "/two_way", "two_way", d.cfg_two, d.two, {},
                               two.first, two.second));
  }
  return csv;
}

Csv exp_predict(const std::string& model, int mesh, int pes, bool smoke, uint64_t seed) {
  std::vector<LayerShape> layers = smoke ? smoke_subset(model) : resolve_model(model);
  Csv csv;
  csv.header =
      "layer,predicted_ru,predicted_gather,simulated_ru,simulated_gather,residual_ru,"
      "residual_gather,ratio_ru_over_gather,rounds_real,rounds_executed,seed";
  NetworkConfig cfg;
  cfg.mesh_rows = mesh;
  cfg.mesh_cols = mesh;
  cfg.pes_per_router = pes;
  cfg.apply_defaults();
  SimOptions opts;
  opts.seed = seed;
  opts.audit_payloads = false;
  for (const LayerShape& l : layers) {
    ComparisonRow row = predicted_vs_simulated(cfg, l, opts);
    char buf[256];
    snprintf(buf, sizeof buf, "%s,%.2f,%.2f,%llu,%llu,%.2f,%.2f,%s,%.4f,%llu,%llu",
             row.layer.c_str(), row.predicted_ru, row.predicted_gather,
             (unsigned long long)row.simulated_ru, (unsigned long long)row.simulated_gather,
             row.residual_ru, row.residual_gather, fmt_ratio(row.ratio_ru_over_gather).c_str(),
             row.rounds_real, (unsigned long long)row.rounds_executed,
             (unsigned long long)seed);
    csv.rows.push_back(buf);
  }
  return csv;
}

Csv exp_run(const NetworkConfig& cfg, const std::vector<LayerShape>& layers, int jobs,
            uint64_t seed) {
  std::vector<SimReport> reports(layers.size());
  parallel_for_ordered(int(layers.size()), jobs, [&](int i) {
    SimOptions opts;
    opts.seed = seed;
    reports[i] = run_layer(cfg, layers[i], opts);
  });
  Csv csv;
  csv.header = csv_header();
  SimReport total;
  for (size_t i = 0; i < layers.size(); ++i) {
    csv.rows.push_back(csv_row("run/" + layers[i].name,
                               result_mode_name(cfg.result_mode), cfg, reports[i]));
    total = merge(std::move(total), reports[i]);
  }
  total.seed = seed;
  total.cfg_hash = config_hash(cfg);
  csv.rows.push_back(csv_row("run/total", result_mode_name(cfg.result_mode), cfg, total));
  return csv;
}

}  // namespace gnoc
