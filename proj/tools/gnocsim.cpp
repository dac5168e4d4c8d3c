#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gnoc/experiments.hpp"
#include "gnoc/workload.hpp"

using namespace gnoc;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string model = "alexnet";
  std::string mesh;
  int pes = 0;
  std::string result_mode;
  std::string streaming_mode;
  long long delta = -2;
  uint64_t seed = 0;
  int jobs = 1;
  bool smoke = false;
  std::string out_dir = "results";
  std::string trace_path;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_model = true) {
  cmd->add_option("--config", a.config_path, "config file (key-value sections)");
  if (with_model) {
    cmd->add_option("--model", a.model, "alexnet | vgg16 | custom:PATH");
  }
  cmd->add_option("--mesh", a.mesh, "mesh size as NxM, e.g. 8x8");
  cmd->add_option("--pes", a.pes, "PEs per router (1,2,4,8)");
  cmd->add_option("--mode", a.result_mode, "gather | repetitive_unicast");
  cmd->add_option("--streaming", a.streaming_mode, "two_way | one_way | none");
  cmd->add_option("--delta", a.delta, "gather timeout in cycles");
  cmd->add_option("--seed", a.seed, "seed recorded in the CSV");
  cmd->add_option("--jobs", a.jobs, "parallel simulations")->check(CLI::PositiveNumber);
  cmd->add_flag("--smoke", a.smoke, "3-layer subset");
  cmd->add_option("--out", a.out_dir, "output directory");
}

std::pair<NetworkConfig, std::vector<LayerShape>> resolve(const CommonArgs& a) {
  NetworkConfig cfg;
  std::vector<LayerShape> layers;
  if (!a.config_path.empty()) {
    LoadedConfig lc = load_config(a.config_path);
    cfg = lc.network;
    layers = lc.layers;
  } else {
    cfg.apply_defaults();
  }
  if (layers.empty()) layers = a.smoke ? smoke_subset(a.model) : resolve_model(a.model);
  if (!a.mesh.empty()) {
    int rows = 0, cols = 0;
    if (sscanf(a.mesh.c_str(), "%dx%d", &rows, &cols) != 2) {
      throw ConfigError("--mesh expects NxM, got '" + a.mesh + "'");
    }
    cfg.mesh_rows = rows;
    cfg.mesh_cols = cols;
    cfg.gather_len = 0;
    cfg.delta = -1;
  }
  if (a.pes) {
    cfg.pes_per_router = a.pes;
    cfg.gather_len = 0;
  }
  if (!a.result_mode.empty()) cfg.result_mode = parse_result_mode(a.result_mode);
  if (!a.streaming_mode.empty()) cfg.streaming_mode = parse_streaming_mode(a.streaming_mode);
  if (a.delta >= -1) cfg.delta = a.delta;
  cfg.apply_defaults();
  cfg.validate();
  return {cfg, layers};
}

std::string emit(const CommonArgs& a, const std::string& name, const Csv& csv) {
  std::filesystem::create_directories(a.out_dir);
  std::string path = a.out_dir + "/" + name + ".csv";
  csv.write(path);
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mesh NoC simulator with gather packets and streaming buses"};
  app.require_subcommand(1);

  CommonArgs run_a, delta_a, packet_a, compare_a, streams_a, predict_a;

  CLI::App* run = app.add_subcommand("run", "simulate a model or config file");
  add_common(run, run_a);
  run->add_option("--trace", run_a.trace_path, "write a per-cycle launch trace");

  CLI::App* sweep_delta = app.add_subcommand(
      "sweep-delta", "timeout sweep on a single-row job, per PEs/router");
  add_common(sweep_delta, delta_a, false);

  CLI::App* sweep_packet = app.add_subcommand(
      "sweep-packet", "one large vs two small gather packets, 8x8 and 16x16");
  add_common(sweep_packet, packet_a, false);

  CLI::App* compare =
      app.add_subcommand("compare", "gather vs repetitive unicast over a model");
  add_common(compare, compare_a);

  CLI::App* streams =
      app.add_subcommand("streams", "two-way / one-way / no-streaming per layer");
  add_common(streams, streams_a);

  CLI::App* predict =
      app.add_subcommand("predict", "closed-form latency vs simulation per layer");
  add_common(predict, predict_a);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto [cfg, layers] = resolve(run_a);
      if (!run_a.trace_path.empty()) {
        std::ofstream trace(run_a.trace_path);
        if (!trace) throw ConfigError("cannot write " + run_a.trace_path);
        SimOptions opts;
        opts.seed = run_a.seed;
        opts.trace = &trace;
        SimReport r = run_network(cfg, layers, opts);
        Csv csv;
        csv.header = csv_header();
        csv.rows.push_back(
            csv_row("run/total", result_mode_name(cfg.result_mode), cfg, r));
        std::cout << emit(run_a, "run", csv) << "\n";
        std::cout << "trace: " << run_a.trace_path << "\n";
        return 0;
      }
      Csv csv = exp_run(cfg, layers, run_a.jobs, run_a.seed);
      std::cout << emit(run_a, "run", csv) << "\n";
    } else if (sweep_delta->parsed()) {
      auto [cfg, layers] = resolve(delta_a);
      Csv csv = exp_delta_sweep(cfg.mesh_cols, delta_a.seed);
      std::cout << emit(delta_a, "sweep_delta", csv) << "\n";
    } else if (sweep_packet->parsed()) {
      Csv csv = exp_packet_size(packet_a.seed);
      std::cout << emit(packet_a, "sweep_packet", csv) << "\n";
    } else if (compare->parsed()) {
      Csv csv = exp_main_comparison(compare_a.model, compare_a.smoke, compare_a.jobs,
                                    compare_a.seed);
      std::cout << emit(compare_a, "compare", csv) << "\n";
    } else if (streams->parsed()) {
      auto [cfg, layers] = resolve(streams_a);
      Csv csv = exp_streaming_modes(streams_a.model, cfg.mesh_cols, cfg.pes_per_router,
                                    streams_a.smoke, streams_a.jobs, streams_a.seed);
      std::cout << emit(streams_a, "streams", csv) << "\n";
    } else if (predict->parsed()) {
      auto [cfg, layers] = resolve(predict_a);
      Csv csv = exp_predict(predict_a.model, cfg.mesh_cols, cfg.pes_per_router,
                            predict_a.smoke, predict_a.seed);
      std::cout << emit(predict_a, "predict", csv) << "\n";
    }
  } catch (const SimStalled& e) {
    std::cerr << "simulation stalled: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
