// evdenoise: synthesize noisy event streams, denoise them with graph spectral
// features, evaluate and plot the result.
//
// Exit codes: 0 success, 2 parse/config/input error, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evgraph/error.hpp"
#include "evgraph/event_model.hpp"
#include "evgraph/kernels.hpp"
#include "evgraph/metrics.hpp"
#include "evgraph/noise_synth.hpp"
#include "evgraph/pipeline.hpp"
#include "evgraph/plot.hpp"
#include "evgraph/rng.hpp"
#include "evgraph/scenes.hpp"

namespace fs = std::filesystem;
using namespace evgraph;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  return fs::path(path.string() + suffix);
}

TimeUnit parse_time_unit(const std::string& s) {
  if (s == "s") return TimeUnit::Seconds;
  if (s == "ms") return TimeUnit::Milliseconds;
  if (s == "us") return TimeUnit::Microseconds;
  fail(ErrorKind::Parse, "unknown time unit '" + s + "' (expected s, ms or us)");
}

FileFormat resolve_format(const std::string& flag, const fs::path& path) {
  if (flag == "csv") return FileFormat::Csv;
  if (flag == "bin" || flag == "binary") return FileFormat::Binary;
  if (flag.empty() || flag == "auto") return format_from_path(path);
  fail(ErrorKind::Parse, "unknown format '" + flag + "'");
}

// Predicted labels: header `label`, then one 0/1 per event in stream order.
void save_labels(const LabelVector& y, const fs::path& path) {
  std::string buf = "label\n";
  buf.reserve(6 + 2 * y.size());
  for (std::uint8_t v : y) {
    buf.push_back(v ? '1' : '0');
    buf.push_back('\n');
  }
  write_text(path, buf);
}

LabelVector load_labels(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 0;
  LabelVector y;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "label") {
        fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                   ": expected header 'label'");
      }
      header = true;
      continue;
    }
    if (line != "0" && line != "1") {
      fail(ErrorKind::Parse,
           path.string() + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    }
    y.push_back(line == "1" ? 1 : 0);
  }
  if (!header) fail(ErrorKind::Parse, path.string() + ": empty label file");
  return y;
}

// Ground truth from either a labels file or a labelled event file.
std::vector<Label> load_truth(const fs::path& path) {
  if (path.extension() != ".bin") {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first == "label") {
      std::vector<Label> out;
      for (std::uint8_t v : load_labels(path)) out.push_back(v ? Label::Real : Label::Noise);
      return out;
    }
  }
  return truth_labels(load_events(path, format_from_path(path)));
}

json pairs_table(const std::vector<EigenPair>& pairs, std::size_t limit) {
  json rows = json::array();
  for (std::size_t i = 0; i < pairs.size() && i < limit; ++i) {
    rows.push_back({{"value", pairs[i].value},
                    {"residual", pairs[i].residual},
                    {"s_value", pairs[i].s_value},
                    {"iterations", pairs[i].iterations},
                    {"converged", pairs[i].converged}});
  }
  return rows;
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string input;
  std::string output;
  std::string format;
  std::string time_unit = "s";
  NoiseSpec noise;
  MovingShapeParams scene;
};

int run_synth(const SynthArgs& a) {
  EventStream clean;
  json echo;
  if (!a.input.empty()) {
    clean = load_events(a.input, format_from_path(a.input), parse_time_unit(a.time_unit));
    echo["input"] = a.input;
  } else {
    clean = moving_shape_stream(a.scene);
    echo["scene"] = {{"kind", "moving-shape"},   {"events", a.scene.n_events},
                     {"width", a.scene.width},   {"height", a.scene.height},
                     {"duration", a.scene.duration}, {"radius", a.scene.radius},
                     {"seed", a.scene.seed}};
  }
  const EventStream noisy = synthesize_noise(clean, a.noise);
  const fs::path out(a.output);
  save_events(noisy, out, resolve_format(a.format, out));
  echo["noise"] = {{"ba_ratio", a.noise.ba_ratio},
                   {"hot_ratio", a.noise.hot_ratio},
                   {"hot_pixels", a.noise.hot_pixel_count},
                   {"seed", a.noise.seed}};
  echo["rng"] = CounterRng::kAlgorithm;
  echo["clean_events"] = clean.size();
  echo["total_events"] = noisy.size();
  write_text(sibling(out, ".config.json"), echo.dump(2) + "\n");
  std::cout << "wrote " << noisy.size() << " events (" << clean.size() << " clean) to " << out
            << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- denoise ----

struct DenoiseArgs {
  std::string input;
  std::string output;
  std::string config;
  std::string diagnostics;
  std::string export_graph;
  std::string time_unit = "s";
  std::string isa = "auto";
  PipelineConfig cfg;
  std::string graph = "eng", solver = "power", mode = "multi", gamma_mode = "half_eps_lin";
};

int run_denoise(DenoiseArgs a, CLI::App& sub) {
  PipelineConfig cfg;
  std::string isa = a.isa;
  std::string time_unit = a.time_unit;
  if (!a.config.empty()) {
    json j;
    try {
      j = json::parse(read_text(a.config));
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, a.config + ": " + e.what());
    }
    cfg = config_from_json(j.contains("pipeline") ? j.at("pipeline") : j, cfg);
    if (j.contains("isa") && sub.count("--isa") == 0) isa = j.at("isa").get<std::string>();
    if (j.contains("time_unit") && sub.count("--time-unit") == 0) {
      time_unit = j.at("time_unit").get<std::string>();
    }
  }
  // Flags given on the command line win over the config file.
  const auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (given("--beta")) cfg.beta = a.cfg.beta;
  if (given("--density-k")) cfg.density_k = a.cfg.density_k;
  if (given("--omega")) cfg.omega = a.cfg.omega;
  if (given("--power-iters")) cfg.power_iters = a.cfg.power_iters;
  if (given("--power-tol")) cfg.power_tol = a.cfg.power_tol;
  if (given("--num-eigvecs")) cfg.num_eigvecs = a.cfg.num_eigvecs;
  if (given("--threshold")) cfg.support_threshold_rel = a.cfg.support_threshold_rel;
  if (given("--eig-cutoff")) cfg.eig_cutoff = a.cfg.eig_cutoff;
  if (given("--knng-k")) cfg.knng_k = a.cfg.knng_k;
  if (given("--gamma")) cfg.gamma_fixed = a.cfg.gamma_fixed;
  if (given("--seed")) cfg.seed = a.cfg.seed;
  if (given("--graph")) cfg.graph = parse_graph_kind(a.graph);
  if (given("--solver")) cfg.solver = parse_solver_kind(a.solver);
  if (given("--mode")) cfg.mode = parse_detection_mode(a.mode);
  if (given("--gamma-mode")) cfg.gamma_mode = parse_gamma_mode(a.gamma_mode);
  cfg.validate();
  kernels::set_isa(kernels::parse_isa(isa));

  const EventStream stream =
      load_events(a.input, format_from_path(a.input), parse_time_unit(time_unit));
  DenoiseResult res;
  try {
    res = denoise(stream, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Numerical) {
      throw Error(ErrorKind::Numerical, std::string("denoise: ") + e.what());
    }
    throw;
  }

  const fs::path out(a.output);
  save_labels(res.labels, out);

  json echo;
  echo["pipeline"] = config_to_json(cfg);
  echo["isa"] = kernels::isa_name(kernels::active().isa);
  echo["rng"] = CounterRng::kAlgorithm;
  echo["time_unit"] = time_unit;
  write_text(sibling(out, ".config.json"), echo.dump(2) + "\n");

  json diag;
  diag["events"] = stream.size();
  diag["knee_value"] = res.knee.value;
  diag["knee_position"] = res.knee.position;
  diag["knee_degenerate"] = res.knee.degenerate;
  diag["eps_lin"] = res.eps_lin;
  diag["gamma"] = res.gamma;
  diag["density_k"] = res.density_k_used;
  diag["edges"] = res.n_edges;
  diag["isolated"] = res.n_isolated;
  diag["labelled_real"] = std::count(res.labels.begin(), res.labels.end(), 1);
  diag["degenerate_detection"] = res.degenerate;
  diag["eigenpairs"] = pairs_table(res.pairs, cfg.solver == SolverKind::Evd ? 50 : res.pairs.size());
  json stages = json::object();
  for (const auto& s : res.stages) stages[s.stage] = s.seconds;
  diag["stage_seconds"] = stages;
  diag["ct_seconds"] = res.ct_seconds;
  if (stream.has_labels()) {
    diag["metrics"] = json::parse(report_json(evaluate(res.labels, truth_labels(stream), res.ct_seconds)));
  }
  const fs::path diag_path = a.diagnostics.empty() ? sibling(out, ".diag.json") : fs::path(a.diagnostics);
  write_text(diag_path, diag.dump(2) + "\n");

  if (!a.export_graph.empty()) {
    const ScaledEvents coords = scale_time(stream, cfg.beta);
    SparseGraph g;
    switch (cfg.graph) {
      case GraphKind::Eng:
        g = build_eng(coords, res.eps_lin, res.gamma);
        break;
      case GraphKind::Knng:
        g = build_knng(coords, std::min(cfg.knng_k, stream.size() - 1), res.gamma);
        break;
      case GraphKind::Vknng:
        g = build_vknng(coords, res.gamma);
        break;
    }
    std::ofstream gout(a.export_graph);
    if (!gout) fail(ErrorKind::Io, "cannot write " + a.export_graph);
    write_edge_list(g, gout);
  }

  std::cout << "events=" << stream.size() << " eps_lin=" << res.eps_lin << " edges=" << res.n_edges
            << " isolated=" << res.n_isolated
            << " real=" << std::count(res.labels.begin(), res.labels.end(), 1)
            << " ct_seconds=" << res.ct_seconds << "\n";
  if (diag.contains("metrics")) {
    const auto& m = diag["metrics"];
    std::cout << "tpr=" << m["tpr"].get<double>() << " tnr=" << m["tnr"].get<double>()
              << " acc=" << m["acc"].get<double>() << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------- eval ----

int run_eval(const std::string& pred_path, const std::string& truth_path, double ct,
             const std::string& out_prefix) {
  const LabelVector pred = load_labels(pred_path);
  const std::vector<Label> truth = load_truth(truth_path);
  const ConfusionReport r = evaluate(pred, truth, ct);
  std::ostringstream text;
  write_report_text(r, text);
  std::cout << text.str();
  if (!out_prefix.empty()) {
    write_text(out_prefix + ".txt", text.str());
    write_text(out_prefix + ".json", report_json(r) + "\n");
  }
  return kExitOk;
}

// ----------------------------------------------------------------- plot ----

int run_plot(const std::string& events_path, const std::string& pred_path,
             const std::string& truth_path, const std::string& out_path,
             const std::string& projection) {
  const EventStream events = load_events(events_path, format_from_path(events_path));
  const LabelVector pred = load_labels(pred_path);
  const std::vector<Label> truth =
      truth_path.empty() ? truth_labels(events) : load_truth(truth_path);
  std::ostringstream svg;
  write_svg_scatter(events, pred, truth, parse_projection(projection), svg);
  write_text(out_path, svg.str());
  return kExitOk;
}

// ---------------------------------------------------------------- bench ----

int run_bench(const std::string& input, const MovingShapeParams& scene, PipelineConfig cfg,
              const std::vector<std::string>& solvers, std::uint32_t hot_pixels,
              std::uint64_t noise_seed, const std::string& json_path) {
  const EventStream clean =
      input.empty() ? moving_shape_stream(scene) : load_events(input, format_from_path(input));
  const std::pair<double, double> splits[] = {{0.10, 0.02}, {0.08, 0.04}, {0.06, 0.06}};
  json rows = json::array();
  std::cout << std::left << std::setw(22) << "noise (BA, hot)" << std::setw(8) << "solver"
            << std::right << std::setw(10) << "CT [s]" << std::setw(8) << "TPR" << std::setw(8)
            << "TNR" << std::setw(8) << "Acc" << "\n";
  for (const auto& [ba, hot] : splits) {
    NoiseSpec spec{ba, hot, hot_pixels, noise_seed};
    const EventStream noisy = synthesize_noise(clean, spec);
    const auto truth = truth_labels(noisy);
    for (const std::string& s : solvers) {
      cfg.solver = parse_solver_kind(s);
      const DenoiseResult res = denoise(noisy, cfg);
      const ConfusionReport r = evaluate(res.labels, truth, res.ct_seconds);
      std::ostringstream label;
      label << "(" << ba * 100 << "%, " << hot * 100 << "%)";
      std::cout << std::left << std::setw(22) << label.str() << std::setw(8) << s << std::right
                << std::fixed << std::setprecision(2) << std::setw(10) << r.ct_seconds
                << std::setprecision(3) << std::setw(8) << r.tpr << std::setw(8) << r.tnr
                << std::setw(8) << r.acc << std::defaultfloat << "\n";
      rows.push_back({{"ba_ratio", ba},
                      {"hot_ratio", hot},
                      {"solver", s},
                      {"events", noisy.size()},
                      {"ct_seconds", r.ct_seconds},
                      {"tpr", r.tpr},
                      {"tnr", r.tnr},
                      {"acc", r.acc}});
    }
  }
  if (!json_path.empty()) {
    json doc;
    doc["pipeline"] = config_to_json(cfg);
    doc["pipeline"].erase("solver");  // varies per row
    doc["rows"] = rows;
    write_text(json_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

void add_scene_flags(CLI::App* app, MovingShapeParams& scene) {
  app->add_option("--scene-events", scene.n_events, "Clean events of the synthetic moving shape");
  app->add_option("--scene-width", scene.width, "Sensor width [px]");
  app->add_option("--scene-height", scene.height, "Sensor height [px]");
  app->add_option("--scene-duration", scene.duration, "Stream duration [s]");
  app->add_option("--scene-radius", scene.radius, "Ring radius [px]");
  app->add_option("--scene-seed", scene.seed, "Scene RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-spectral denoising for event-camera streams"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Add BA and hot-pixel noise to a clean stream");
  s->add_option("--input", synth.input, "Clean event file (omit to generate a moving shape)");
  s->add_option("--output", synth.output, "Noisy labelled event file")->required();
  s->add_option("--format", synth.format, "csv | bin (default: from extension)");
  s->add_option("--time-unit", synth.time_unit, "CSV timestamp unit: s | ms | us");
  s->add_option("--ba-ratio", synth.noise.ba_ratio, "BA noise, fraction of clean events");
  s->add_option("--hot-ratio", synth.noise.hot_ratio, "Hot-pixel noise, fraction of clean events");
  s->add_option("--hot-pixels", synth.noise.hot_pixel_count, "Number of hot pixels");
  s->add_option("--seed", synth.noise.seed, "Noise RNG seed");
  add_scene_flags(s, synth.scene);

  DenoiseArgs dn;
  auto* d = app.add_subcommand("denoise", "Label events as real (1) or noise (0)");
  d->footer(
      "Writes <output> (header 'label', one 0/1 per event in time order),\n"
      "<output>.config.json (effective parameters; pass back with --config to\n"
      "reproduce) and <output>.diag.json (knee, radius, graph size, eigenpair\n"
      "table with values and residuals, stage timings, CT).");
  d->add_option("--input", dn.input, "Event file (csv or bin)")->required()->check(CLI::ExistingFile);
  d->add_option("--output", dn.output, "Predicted labels file")->required();
  d->add_option("--config", dn.config, "JSON config (flags override it)");
  d->add_option("--diagnostics", dn.diagnostics, "Diagnostics JSON path");
  d->add_option("--export-graph", dn.export_graph, "Write the graph as 'i j weight' lines");
  d->add_option("--time-unit", dn.time_unit, "CSV timestamp unit: s | ms | us");
  d->add_option("--isa", dn.isa, "Kernel ISA: auto | scalar | avx2 | neon");
  d->add_option("--beta", dn.cfg.beta, "Time scale factor");
  d->add_option("--density-k", dn.cfg.density_k, "Neighbours for the density profile");
  d->add_option("--omega", dn.cfg.omega, "Polynomial order of the reordering operator");
  d->add_option("--power-iters", dn.cfg.power_iters, "Power iterations per eigenpair");
  d->add_option("--power-tol", dn.cfg.power_tol, "Power iteration tolerance");
  d->add_option("--num-eigvecs", dn.cfg.num_eigvecs, "Eigenpairs in multi mode");
  d->add_option("--threshold", dn.cfg.support_threshold_rel, "Relative support threshold");
  d->add_option("--eig-cutoff", dn.cfg.eig_cutoff, "Eigenvalue cutoff in multi mode");
  d->add_option("--graph", dn.graph, "eng | knng | vknng");
  d->add_option("--knng-k", dn.cfg.knng_k, "k for the kNN graph");
  d->add_option("--solver", dn.solver, "power | evd");
  d->add_option("--mode", dn.mode, "single | multi");
  d->add_option("--gamma-mode", dn.gamma_mode, "half_eps_lin | half_eps_sq | fixed");
  d->add_option("--gamma", dn.cfg.gamma_fixed, "RBF decay for --gamma-mode fixed");
  d->add_option("--seed", dn.cfg.seed, "Power iteration seed");

  std::string pred_path, truth_path, eval_out;
  double ct = 0.0;
  auto* e = app.add_subcommand("eval", "Confusion report of predicted labels");
  e->footer(
      "Report keys: tp fp tn fn tpr tnr acc ct_seconds. fp counts real events\n"
      "labelled noise and fn noise events labelled real; tpr = tp/(tp+fp),\n"
      "tnr = tn/(tn+fn). --output-prefix P writes P.txt (key=value) and P.json.");
  e->add_option("--pred", pred_path, "Predicted labels file")->required();
  e->add_option("--truth", truth_path, "Labelled event file or labels file")->required();
  e->add_option("--ct", ct, "Computation time to record [s]");
  e->add_option("--output-prefix", eval_out, "Write <prefix>.txt and <prefix>.json");

  std::string plot_events, plot_pred, plot_truth, plot_out, projection = "xy";
  auto* p = app.add_subcommand("plot", "SVG scatter coloured by confusion class");
  p->add_option("--events", plot_events, "Event file")->required();
  p->add_option("--pred", plot_pred, "Predicted labels file")->required();
  p->add_option("--truth", plot_truth, "Ground truth (default: labels in --events)");
  p->add_option("--output", plot_out, "SVG path")->required();
  p->add_option("--projection", projection, "xy | xt | yt");

  std::string bench_input, bench_json, bench_solvers = "power,evd";
  MovingShapeParams bench_scene;
  PipelineConfig bench_cfg;
  std::uint32_t bench_hot_pixels = 4;
  std::uint64_t bench_noise_seed = 7;
  std::string bench_mode = "multi";
  auto* b = app.add_subcommand("bench", "Sweep the (BA, hot) noise splits and tabulate metrics");
  b->add_option("--input", bench_input, "Clean event file (omit for the moving shape)");
  b->add_option("--solvers", bench_solvers, "Comma-separated solvers");
  b->add_option("--mode", bench_mode, "single | multi");
  b->add_option("--hot-pixels", bench_hot_pixels, "Number of hot pixels");
  b->add_option("--noise-seed", bench_noise_seed, "Noise RNG seed");
  b->add_option("--json", bench_json, "Write rows as JSON");
  add_scene_flags(b, bench_scene);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*s) return run_synth(synth);
    if (*d) return run_denoise(dn, *d);
    if (*e) return run_eval(pred_path, truth_path, ct, eval_out);
    if (*p) return run_plot(plot_events, plot_pred, plot_truth, plot_out, projection);
    if (*b) {
      std::vector<std::string> solvers;
      std::stringstream ss(bench_solvers);
      for (std::string tok; std::getline(ss, tok, ',');) {
        if (!tok.empty()) solvers.push_back(tok);
      }
      bench_cfg.mode = parse_detection_mode(bench_mode);
      return run_bench(bench_input, bench_scene, bench_cfg, solvers, bench_hot_pixels,
                       bench_noise_seed, bench_json);
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.kind() == ErrorKind::Numerical ? kExitNumerical : kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
