#pragma once

// End-to-end denoising: scale time, estimate the radius from the density
// knee, build the graph, solve for eigenpairs and label events.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evgraph/detect.hpp"
#include "evgraph/event_model.hpp"
#include "evgraph/graph_construct.hpp"
#include "evgraph/spectral.hpp"

namespace evgraph {

enum class GraphKind { Eng, Knng, Vknng };
enum class SolverKind { Evd, Power };
enum class GammaMode { HalfEpsLin, HalfEpsSq, Fixed };

struct PipelineConfig {
  double beta = 50.0;
  std::size_t density_k = 10;
  int omega = 30;
  std::size_t power_iters = 50;
  double power_tol = 1e-8;
  std::size_t num_eigvecs = 20;
  double support_threshold_rel = 1e-3;
  double eig_cutoff = 1.0;
  GraphKind graph = GraphKind::Eng;
  std::size_t knng_k = 10;
  SolverKind solver = SolverKind::Power;
  DetectionMode mode = DetectionMode::Multi;
  GammaMode gamma_mode = GammaMode::HalfEpsLin;
  double gamma_fixed = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
// Missing keys keep the values already in `base`.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});

std::string to_string(GraphKind g);
std::string to_string(SolverKind s);
std::string to_string(DetectionMode m);
std::string to_string(GammaMode g);
GraphKind parse_graph_kind(const std::string& s);
SolverKind parse_solver_kind(const std::string& s);
DetectionMode parse_detection_mode(const std::string& s);
GammaMode parse_gamma_mode(const std::string& s);

struct StageTiming {
  std::string stage;
  double seconds;
};

struct DenoiseResult {
  LabelVector labels;
  KneePoint knee;         // density knee (squared units)
  double eps_lin = 0.0;   // εNG radius
  double gamma = 0.0;
  std::size_t n_edges = 0;
  std::size_t n_isolated = 0;
  std::size_t density_k_used = 0;
  std::vector<EigenPair> pairs;  // vectors over the non-isolated nodes
  bool degenerate = false;
  std::vector<StageTiming> stages;
  double ct_seconds = 0.0;
};

DenoiseResult denoise(const EventStream& stream, const PipelineConfig& cfg);

// Same pipeline on already-built graph: Laplacian, solver and detection.
DenoiseResult denoise_graph(const SparseGraph& graph, const PipelineConfig& cfg);

}  // namespace evgraph
