#pragma once

// Confusion counts with the naming used in the event-denoising literature
// this library reproduces:
//   tp = real events labelled real      fp = real events labelled noise
//   tn = noise events labelled noise    fn = noise events labelled real
// In conventional terms, fp here is a false negative and fn a false
// positive. tpr = tp / (tp + fp), tnr = tn / (tn + fn).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evgraph/detect.hpp"
#include "evgraph/event_model.hpp"

namespace evgraph {

struct ConfusionReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double tpr = 1.0;
  double tnr = 1.0;
  double acc = 1.0;
  // Set when a rate's denominator is zero (the rate is then reported as 1).
  bool tpr_undefined = false;
  bool tnr_undefined = false;
  bool acc_undefined = false;
  double ct_seconds = 0.0;
};

ConfusionReport evaluate(std::span<const std::uint8_t> pred, std::span<const Label> truth,
                         double elapsed_seconds = 0.0);

std::vector<Label> truth_labels(const EventStream& stream);

// `key=value` lines.
void write_report_text(const ConfusionReport& r, std::ostream& out);
// JSON object with the same keys.
std::string report_json(const ConfusionReport& r);

}  // namespace evgraph
