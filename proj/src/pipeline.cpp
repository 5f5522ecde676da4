#include "evgraph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "evgraph/error.hpp"

namespace evgraph {

namespace {

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<const char*, E> (&table)[N], const char* what) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  fail(ErrorKind::Parse, std::string("unknown ") + what + " '" + s + "'");
}

template <typename E, std::size_t N>
std::string enum_name(E v, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::pair<const char*, GraphKind> kGraphs[] = {
    {"eng", GraphKind::Eng}, {"knng", GraphKind::Knng}, {"vknng", GraphKind::Vknng}};
constexpr std::pair<const char*, SolverKind> kSolvers[] = {{"evd", SolverKind::Evd},
                                                           {"power", SolverKind::Power}};
constexpr std::pair<const char*, DetectionMode> kModes[] = {{"single", DetectionMode::Single},
                                                            {"multi", DetectionMode::Multi}};
constexpr std::pair<const char*, GammaMode> kGammas[] = {{"half_eps_lin", GammaMode::HalfEpsLin},
                                                         {"half_eps_sq", GammaMode::HalfEpsSq},
                                                         {"fixed", GammaMode::Fixed}};

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out), last_(clock::now()) {}

  void mark(const char* stage) {
    const auto now = clock::now();
    out_.push_back({stage, std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  using clock = std::chrono::steady_clock;
  std::vector<StageTiming>& out_;
  clock::time_point last_;
};

DetectionConfig detection_config(const PipelineConfig& cfg) {
  DetectionConfig d;
  d.mode = cfg.mode;
  d.support_threshold_rel = cfg.support_threshold_rel;
  d.eig_cutoff = cfg.eig_cutoff;
  d.num_eigvecs = cfg.num_eigvecs;
  return d;
}

// Laplacian, eigenpairs and labels for a built graph.
void solve_and_detect(const SparseGraph& graph, const PipelineConfig& cfg, DenoiseResult& res,
                      StageClock& clock) {
  const DetectionConfig dcfg = detection_config(cfg);
  res.n_edges = graph.edge_count();
  if (cfg.mode == DetectionMode::Multi) {
    const NormalizedLaplacian nl = normalized_laplacian(graph);
    res.n_isolated = nl.isolated.size();
    clock.mark("laplacian");
    if (!nl.kept.empty()) {
      if (cfg.solver == SolverKind::Evd) {
        res.pairs = dense_evd(nl.matrix);
      } else {
        const SparseGraph sub = induced_subgraph(graph, nl.kept);
        const NullSpace ns = null_space(sub, LaplacianKind::Normalized);
        TopKOptions opts;
        opts.omega = cfg.omega;
        opts.max_iters = cfg.power_iters;
        opts.tol = cfg.power_tol;
        opts.seed = cfg.seed;
        opts.null_space = &ns;
        res.pairs = topk_small_eigvecs(nl.matrix, LaplacianKind::Normalized,
                                       std::min(cfg.num_eigvecs, nl.kept.size()), opts);
      }
    }
    clock.mark("solve");
    const Detection det = detect_multi(res.pairs, graph.n_nodes, nl.isolated, dcfg);
    res.labels = det.labels;
    res.degenerate = det.degenerate;
    clock.mark("detect");
    return;
  }

  std::vector<std::int32_t> kept, isolated;
  for (std::size_t i = 0; i < graph.n_nodes; ++i) {
    (graph.degrees[i] > 0.0 ? kept : isolated).push_back(static_cast<std::int32_t>(i));
  }
  res.n_isolated = isolated.size();
  const SparseGraph sub = induced_subgraph(graph, kept);
  const CsrMatrix lap = laplacian(sub);
  clock.mark("laplacian");
  EigenPair fiedler;
  bool found = false;
  if (!kept.empty()) {
    if (cfg.solver == SolverKind::Evd) {
      res.pairs = dense_evd(lap);
      for (const EigenPair& p : res.pairs) {
        if (p.value > dcfg.zero_floor) {
          fiedler = p;
          found = true;
          break;
        }
      }
    } else {
      const NullSpace ns = null_space(sub, LaplacianKind::Combinatorial);
      TopKOptions opts;
      opts.omega = cfg.omega;
      opts.max_iters = cfg.power_iters;
      opts.tol = cfg.power_tol;
      opts.seed = cfg.seed;
      opts.null_space = &ns;
      res.pairs = topk_small_eigvecs(lap, LaplacianKind::Combinatorial, 1, opts);
      fiedler = res.pairs.front();
      found = true;
    }
  }
  clock.mark("solve");
  if (found) {
    const Detection det = detect_single(fiedler, graph.n_nodes, isolated, dcfg);
    res.labels = det.labels;
    res.degenerate = det.degenerate;
  } else {
    res.labels.assign(graph.n_nodes, 0);
    res.degenerate = true;
  }
  clock.mark("detect");
}

}  // namespace

std::string to_string(GraphKind g) { return enum_name(g, kGraphs); }
std::string to_string(SolverKind s) { return enum_name(s, kSolvers); }
std::string to_string(DetectionMode m) { return enum_name(m, kModes); }
std::string to_string(GammaMode g) { return enum_name(g, kGammas); }
GraphKind parse_graph_kind(const std::string& s) { return parse_enum(s, kGraphs, "graph kind"); }
SolverKind parse_solver_kind(const std::string& s) { return parse_enum(s, kSolvers, "solver"); }
DetectionMode parse_detection_mode(const std::string& s) {
  return parse_enum(s, kModes, "detection mode");
}
GammaMode parse_gamma_mode(const std::string& s) { return parse_enum(s, kGammas, "gamma mode"); }

void PipelineConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::InvalidParameter, std::string(name) + " must be positive");
    }
  };
  positive(beta, "beta");
  positive(power_tol, "power_tol");
  positive(support_threshold_rel, "support_threshold_rel");
  positive(eig_cutoff, "eig_cutoff");
  positive(gamma_fixed, "gamma");
  if (density_k < 1) fail(ErrorKind::InvalidParameter, "density_k must be >= 1");
  if (omega < 2) fail(ErrorKind::InvalidParameter, "omega must be >= 2");
  if (power_iters < 1) fail(ErrorKind::InvalidParameter, "power_iters must be >= 1");
  if (num_eigvecs < 1) fail(ErrorKind::InvalidParameter, "num_eigvecs must be >= 1");
  if (knng_k < 1) fail(ErrorKind::InvalidParameter, "knng_k must be >= 1");
  detection_config(*this).validate();
}

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["beta"] = cfg.beta;
  j["density_k"] = cfg.density_k;
  j["omega"] = cfg.omega;
  j["power_iters"] = cfg.power_iters;
  j["power_tol"] = cfg.power_tol;
  j["num_eigvecs"] = cfg.num_eigvecs;
  j["support_threshold_rel"] = cfg.support_threshold_rel;
  j["eig_cutoff"] = cfg.eig_cutoff;
  j["graph"] = to_string(cfg.graph);
  j["knng_k"] = cfg.knng_k;
  j["solver"] = to_string(cfg.solver);
  j["mode"] = to_string(cfg.mode);
  j["gamma_mode"] = to_string(cfg.gamma_mode);
  j["gamma"] = cfg.gamma_fixed;
  j["seed"] = cfg.seed;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig cfg) {
  try {
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("density_k")) cfg.density_k = j.at("density_k").get<std::size_t>();
    if (j.contains("omega")) cfg.omega = j.at("omega").get<int>();
    if (j.contains("power_iters")) cfg.power_iters = j.at("power_iters").get<std::size_t>();
    if (j.contains("power_tol")) cfg.power_tol = j.at("power_tol").get<double>();
    if (j.contains("num_eigvecs")) cfg.num_eigvecs = j.at("num_eigvecs").get<std::size_t>();
    if (j.contains("support_threshold_rel")) {
      cfg.support_threshold_rel = j.at("support_threshold_rel").get<double>();
    }
    if (j.contains("eig_cutoff")) cfg.eig_cutoff = j.at("eig_cutoff").get<double>();
    if (j.contains("graph")) cfg.graph = parse_graph_kind(j.at("graph").get<std::string>());
    if (j.contains("knng_k")) cfg.knng_k = j.at("knng_k").get<std::size_t>();
    if (j.contains("solver")) cfg.solver = parse_solver_kind(j.at("solver").get<std::string>());
    if (j.contains("mode")) cfg.mode = parse_detection_mode(j.at("mode").get<std::string>());
    if (j.contains("gamma_mode")) {
      cfg.gamma_mode = parse_gamma_mode(j.at("gamma_mode").get<std::string>());
    }
    if (j.contains("gamma")) cfg.gamma_fixed = j.at("gamma").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("invalid config: ") + e.what());
  }
  return cfg;
}

DenoiseResult denoise(const EventStream& stream, const PipelineConfig& cfg) {
  cfg.validate();
  const std::size_t n = stream.size();
  if (n < 2) fail(ErrorKind::InvalidInput, "denoising needs at least two events");
  DenoiseResult res;
  const auto start = std::chrono::steady_clock::now();
  StageClock clock(res.stages);

  const ScaledEvents coords = scale_time(stream, cfg.beta);
  clock.mark("scale");
  res.density_k_used = std::min(cfg.density_k, n - 1);
  const DensityProfile profile = local_density(coords, res.density_k_used);
  clock.mark("density");
  res.knee = knee_epsilon(profile);
  res.eps_lin = std::sqrt(res.knee.value);
  switch (cfg.gamma_mode) {
    case GammaMode::HalfEpsLin:
      res.gamma = res.eps_lin / 2.0;
      break;
    case GammaMode::HalfEpsSq:
      res.gamma = res.knee.value / 2.0;
      break;
    case GammaMode::Fixed:
      res.gamma = cfg.gamma_fixed;
      break;
  }
  // A zero radius (all densities zero) leaves no decay scale; fall back to
  // unit decay, which only affects the weights of coincident events.
  if (!(res.gamma > 0.0)) res.gamma = 1.0;
  clock.mark("knee");

  SparseGraph graph;
  switch (cfg.graph) {
    case GraphKind::Eng:
      graph = build_eng(coords, res.eps_lin, res.gamma);
      break;
    case GraphKind::Knng:
      graph = build_knng(coords, std::min(cfg.knng_k, n - 1), res.gamma);
      break;
    case GraphKind::Vknng:
      graph = build_vknng(coords, res.gamma);
      break;
  }
  clock.mark("graph");
  solve_and_detect(graph, cfg, res, clock);
  res.ct_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

DenoiseResult denoise_graph(const SparseGraph& graph, const PipelineConfig& cfg) {
  cfg.validate();
  DenoiseResult res;
  const auto start = std::chrono::steady_clock::now();
  StageClock clock(res.stages);
  solve_and_detect(graph, cfg, res, clock);
  res.ct_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace evgraph
