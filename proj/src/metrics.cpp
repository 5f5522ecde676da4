#include "evgraph/metrics.hpp"

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "evgraph/error.hpp"

namespace evgraph {

ConfusionReport evaluate(std::span<const std::uint8_t> pred, std::span<const Label> truth,
                         double elapsed_seconds) {
  if (pred.size() != truth.size()) {
    fail(ErrorKind::InvalidInput, "prediction has " + std::to_string(pred.size()) +
                                      " labels but ground truth has " +
                                      std::to_string(truth.size()));
  }
  ConfusionReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool said_real = pred[i] != 0;
    switch (truth[i]) {
      case Label::Real:
        (said_real ? r.tp : r.fp)++;
        break;
      case Label::Noise:
        (said_real ? r.fn : r.tn)++;
        break;
      case Label::Unknown:
        fail(ErrorKind::InvalidInput, "ground truth label of event " + std::to_string(i) +
                                          " is unknown");
    }
  }
  const auto rate = [](std::size_t num, std::size_t den, bool& undefined) {
    undefined = den == 0;
    return undefined ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.tpr = rate(r.tp, r.tp + r.fp, r.tpr_undefined);
  r.tnr = rate(r.tn, r.tn + r.fn, r.tnr_undefined);
  r.acc = rate(r.tp + r.tn, pred.size(), r.acc_undefined);
  r.ct_seconds = elapsed_seconds;
  return r;
}

std::vector<Label> truth_labels(const EventStream& stream) {
  std::vector<Label> out;
  out.reserve(stream.size());
  for (const Event& e : stream.events()) out.push_back(e.label);
  return out;
}

void write_report_text(const ConfusionReport& r, std::ostream& out) {
  out << "tp=" << r.tp << '\n'
      << "fp=" << r.fp << '\n'
      << "tn=" << r.tn << '\n'
      << "fn=" << r.fn << '\n'
      << "tpr=" << r.tpr << '\n'
      << "tnr=" << r.tnr << '\n'
      << "acc=" << r.acc << '\n'
      << "ct_seconds=" << r.ct_seconds << '\n';
  if (r.tpr_undefined) out << "tpr_undefined=1\n";
  if (r.tnr_undefined) out << "tnr_undefined=1\n";
}

std::string report_json(const ConfusionReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  j["tpr"] = r.tpr;
  j["tnr"] = r.tnr;
  j["acc"] = r.acc;
  j["ct_seconds"] = r.ct_seconds;
  j["tpr_undefined"] = r.tpr_undefined;
  j["tnr_undefined"] = r.tnr_undefined;
  j["acc_undefined"] = r.acc_undefined;
  return j.dump(2);
}

}  // namespace evgraph
