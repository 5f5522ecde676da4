#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/metrics.hpp"
#include "evgraph/noise_synth.hpp"
#include "evgraph/pipeline.hpp"
#include "evgraph/scenes.hpp"

using namespace evgraph;

namespace {

EventStream small_scene(std::size_t clean, std::uint64_t seed = 1, bool compact = false) {
  MovingShapeParams p;
  p.n_events = clean;
  p.seed = seed;
  if (compact) {
    // Dense enough that the low modes of S cover the whole ring.
    p.duration = 0.5;
    p.radius = 3.0;
  }
  return synthesize_noise(moving_shape_stream(p), {0.06, 0.06, 8, seed});
}

double agreement(const LabelVector& a, const LabelVector& b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("config json round-trips and rejects bad values") {
  PipelineConfig c;
  c.graph = GraphKind::Vknng;
  c.solver = SolverKind::Evd;
  c.mode = DetectionMode::Single;
  c.gamma_mode = GammaMode::Fixed;
  c.gamma_fixed = 0.25;
  c.seed = 123456789012345ULL;
  c.omega = 12;
  const auto j = config_to_json(c);
  const PipelineConfig back = config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(config_to_json(back) == j);

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"solver", "lobpcg"}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"beta", "fast"}}), Error);
  PipelineConfig bad;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("evd and power agree on 500-event fixtures") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CAPTURE(seed);
    const EventStream s = small_scene(446, seed, true);
    CHECK(s.size() == 500);
    PipelineConfig c;
    c.solver = SolverKind::Evd;
    const DenoiseResult evd = denoise(s, c);
    c.solver = SolverKind::Power;
    const DenoiseResult pow = denoise(s, c);
    CHECK(agreement(evd.labels, pow.labels) >= 0.98);
    const ConfusionReport r = evaluate(pow.labels, truth_labels(s));
    CHECK(r.acc >= 0.9);
  }
}

TEST_CASE("denoise is deterministic and stage timings cover the CT") {
  const EventStream s = small_scene(900, 3);
  const DenoiseResult a = denoise(s, {});
  const DenoiseResult b = denoise(s, {});
  CHECK(a.labels == b.labels);
  CHECK(a.labels.size() == s.size());
  CHECK(a.eps_lin == b.eps_lin);
  CHECK(a.eps_lin == doctest::Approx(std::sqrt(a.knee.value)));
  CHECK(a.gamma == doctest::Approx(a.eps_lin / 2));
  double sum = 0.0;
  for (const auto& st : a.stages) sum += st.seconds;
  CHECK(std::abs(sum - a.ct_seconds) <= 0.05 * a.ct_seconds);
  for (const auto& p : a.pairs) CHECK(p.residual >= 0.0);
}

TEST_CASE("every graph, mode and gamma option runs end to end") {
  const EventStream s = small_scene(400, 5);
  for (GraphKind g : {GraphKind::Eng, GraphKind::Knng, GraphKind::Vknng}) {
    for (DetectionMode m : {DetectionMode::Single, DetectionMode::Multi}) {
      for (GammaMode gm : {GammaMode::HalfEpsLin, GammaMode::HalfEpsSq, GammaMode::Fixed}) {
        PipelineConfig c;
        c.graph = g;
        c.mode = m;
        c.gamma_mode = gm;
        const DenoiseResult r = denoise(s, c);
        CHECK(r.labels.size() == s.size());
        if (gm == GammaMode::HalfEpsSq) CHECK(r.gamma == doctest::Approx(r.knee.value / 2));
        if (gm == GammaMode::Fixed) CHECK(r.gamma == 1.0);
      }
    }
  }
}

TEST_CASE("degenerate inputs: two duplicates, one event, all coincident") {
  const EventStream dup({{3, 3, 0.5, Label::Real}, {3, 3, 0.5, Label::Real}}, 8, 8);
  for (SolverKind sv : {SolverKind::Evd, SolverKind::Power}) {
    for (DetectionMode m : {DetectionMode::Single, DetectionMode::Multi}) {
      PipelineConfig c;
      c.solver = sv;
      c.mode = m;
      const DenoiseResult r = denoise(dup, c);
      CHECK(r.labels.size() == 2);
      CHECK(r.density_k_used == 1);
      CHECK(r.eps_lin == 0.0);
      CHECK(r.gamma == 1.0);  // zero radius falls back to unit decay
      CHECK(r.n_edges == 1);
    }
  }
  CHECK_THROWS_AS(denoise(EventStream({{1, 1, 0.0, Label::Real}}, 4, 4), {}), Error);
}

TEST_CASE("isolated events are always labelled noise") {
  // Two far-apart clusters plus a lone event far from both.
  std::vector<Event> ev;
  for (int i = 0; i < 30; ++i) ev.push_back({static_cast<std::uint16_t>(i % 3), 0, 0.001 * i, Label::Real});
  ev.push_back({100, 100, 0.5, Label::Noise});
  const EventStream s(std::move(ev), 128, 128);
  const DenoiseResult r = denoise(s, {});
  CHECK(r.n_isolated >= 1);
  CHECK(r.labels.back() == 0);
}
