#include "capnn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace capnn {
namespace {

using nlohmann::ordered_json;

ordered_json meta_json(const OutputMeta& meta) {
  ordered_json j;
  j["tool"] = "capnn";
  j["version"] = std::string(kVersion);
  j["command"] = meta.command;
  j["preset"] = meta.preset;
  j["seed"] = meta.seed;
  j["config_hash"] = hex64(meta.config_hash);
  j["config"] = meta.config_text;
  return j;
}

std::string format2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_fixed(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string hex64(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string meta_comment(const OutputMeta& meta) {
  std::string line = "# capnn " + std::string(kVersion) + " seed=" + std::to_string(meta.seed) +
                     " config_hash=" + hex64(meta.config_hash);
  if (!meta.command.empty()) line += " command=" + meta.command;
  if (!meta.preset.empty()) line += " preset=" + meta.preset;
  return line;
}

void write_report_csv(std::ostream& out, const std::vector<AggregateReport>& reports,
                      const OutputMeta& meta) {
  out << meta_comment(meta) << "\n";
  out << "T,learner,mean_loss,q10,q90\n";
  for (const auto& r : reports) {
    for (std::size_t c = 0; c < r.checkpoints.size(); ++c) {
      out << r.checkpoints[c] << ',' << r.learner << ',' << format_fixed(r.mean[c]) << ','
          << format_fixed(r.q10[c]) << ',' << format_fixed(r.q90[c]) << '\n';
    }
  }
}

std::string report_json(const std::vector<AggregateReport>& reports, const OutputMeta& meta) {
  ordered_json j = meta_json(meta);
  ordered_json learners = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json l;
    l["learner"] = r.learner;
    l["generator"] = r.generator;
    l["base_seed"] = r.base_seed;
    l["trials"] = r.trials();
    l["config_hash"] = hex64(r.config_hash);
    l["checkpoints"] = r.checkpoints;
    l["mean_loss"] = r.mean;
    l["q10"] = r.q10;
    l["q90"] = r.q90;
    l["min"] = r.min;
    l["max"] = r.max;
    // Weak consistency reads the mean curve; strong consistency reads each
    // trial's own curve.
    ordered_json trials = ordered_json::array();
    for (std::size_t i = 0; i < r.trials(); ++i) {
      ordered_json t;
      t["seed"] = r.trial_seeds[i];
      t["errors"] = r.trial_errors[i];
      std::vector<double> curve;
      for (std::size_t c = 0; c < r.checkpoints.size(); ++c) curve.push_back(r.trial_loss(i, c));
      t["loss"] = curve;
      trials.push_back(std::move(t));
    }
    l["trials_detail"] = std::move(trials);
    learners.push_back(std::move(l));
  }
  j["learners"] = std::move(learners);
  return j.dump(2) + "\n";
}

std::string run_report_json(const RunReport& r) {
  ordered_json j;
  j["learner"] = r.learner;
  j["generator"] = r.generator;
  j["seed"] = r.seed;
  j["config_hash"] = hex64(r.config_hash);
  j["checkpoints"] = r.checkpoints;
  j["loss"] = r.loss;
  j["error_times"] = r.error_times;
  j["dataset_size"] = r.dataset_size;
  j["deletions"] = r.deletions;
  j["tree"] = {{"max_children", r.tree.max_children},
               {"depth_histogram", r.tree.depth_histogram}};
  return j.dump(2) + "\n";
}

void write_smv_csv(std::ostream& out, const PartitionSpec& partition, const SmvReport& report,
                   const OutputMeta& meta) {
  out << meta_comment(meta) << " partition=" << partition.to_string() << "\n";
  out << "T,cells,ratio\n";
  for (const auto& row : report.rows) {
    out << row.T << ',' << row.count << ',' << format_fixed(row.ratio) << '\n';
  }
  out << "# verdict=" << to_string(report.verdict) << "\n";
}

std::string smv_json(const PartitionSpec& partition, const SmvReport& report,
                     const OutputMeta& meta) {
  ordered_json j = meta_json(meta);
  j["partition"] = partition.to_string();
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"T", row.T}, {"cells", row.count}, {"ratio", row.ratio}});
  }
  j["rows"] = std::move(rows);
  j["verdict"] = std::string(to_string(report.verdict));
  return j.dump(2) + "\n";
}

void write_crf_csv(std::ostream& out, const IntervalSet& set, const std::vector<CrfTrial>& trials,
                   const OutputMeta& meta) {
  out << meta_comment(meta) << " set=" << set.to_string() << "\n";
  out << "trial,seed,T,hits,frequency\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    for (const auto& pt : trials[i].curve) {
      out << i << ',' << trials[i].seed << ',' << pt.T << ',' << pt.hits << ','
          << format_fixed(pt.frequency) << '\n';
    }
  }
}

std::string crf_json(const IntervalSet& set, const std::vector<CrfTrial>& trials,
                     const OutputMeta& meta) {
  ordered_json j = meta_json(meta);
  j["set"] = set.to_string();
  ordered_json arr = ordered_json::array();
  for (const auto& t : trials) {
    ordered_json curve = ordered_json::array();
    for (const auto& pt : t.curve) {
      curve.push_back({{"T", pt.T}, {"hits", pt.hits}, {"frequency", pt.frequency}});
    }
    arr.push_back({{"seed", t.seed}, {"curve", std::move(curve)}});
  }
  j["trials"] = std::move(arr);
  if (!trials.empty() && !trials.front().curve.empty()) {
    const std::size_t n = trials.front().curve.size();
    ordered_json mean = ordered_json::array();
    for (std::size_t c = 0; c < n; ++c) {
      std::uint64_t hits = 0;
      for (const auto& t : trials) hits += t.curve.at(c).hits;
      const double T = static_cast<double>(trials.front().curve[c].T);
      mean.push_back({{"T", trials.front().curve[c].T},
                      {"frequency", static_cast<double>(hits) /
                                        (T * static_cast<double>(trials.size()))}});
    }
    j["mean"] = std::move(mean);
  }
  return j.dump(2) + "\n";
}

std::string loss_curve_svg(const std::vector<AggregateReport>& reports, const OutputMeta& meta) {
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  static const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::uint64_t t_min = UINT64_MAX, t_max = 1;
  for (const auto& r : reports) {
    for (auto T : r.checkpoints) {
      t_min = std::min(t_min, T);
      t_max = std::max(t_max, T);
    }
  }
  if (t_min == UINT64_MAX) t_min = 1;
  const double lx0 = std::log10(static_cast<double>(t_min));
  double lx1 = std::log10(static_cast<double>(t_max));
  if (lx1 <= lx0) lx1 = lx0 + 1.0;
  auto px = [&](std::uint64_t T) {
    return kLeft + (std::log10(static_cast<double>(T)) - lx0) / (lx1 - lx0) * plot_w;
  };
  auto py = [&](double loss) { return kTop + (1.0 - std::clamp(loss, 0.0, 1.0)) * plot_h; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format2(kWidth) + "\" height=\"" +
       format2(kHeight) + "\" viewBox=\"0 0 " + format2(kWidth) + " " + format2(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<!-- " + xml_escape(meta_comment(meta).substr(2)) + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + format2(kLeft) + "\" y=\"24\" font-size=\"14\">average loss vs T" +
       (meta.preset.empty() ? std::string() : " (" + xml_escape(meta.preset) + ")") +
       "</text>\n";

  // Axes and grid.
  s += "<g stroke=\"#999\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<rect x=\"" + format2(kLeft) + "\" y=\"" + format2(kTop) + "\" width=\"" +
       format2(plot_w) + "\" height=\"" + format2(plot_h) + "\"/>\n";
  for (int i = 1; i < 4; ++i) {
    const double y = py(i / 4.0);
    s += "<line x1=\"" + format2(kLeft) + "\" y1=\"" + format2(y) + "\" x2=\"" +
         format2(kLeft + plot_w) + "\" y2=\"" + format2(y) + "\" stroke=\"#ddd\"/>\n";
  }
  s += "</g>\n<g fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s += "<text x=\"" + format2(kLeft - 8) + "\" y=\"" + format2(py(v) + 4) +
         "\" text-anchor=\"end\">" + format2(v) + "</text>\n";
  }
  for (std::uint64_t decade = 1; decade <= t_max && decade <= UINT64_MAX / 10; decade *= 10) {
    if (decade < t_min) continue;
    s += "<text x=\"" + format2(px(decade)) + "\" y=\"" + format2(kTop + plot_h + 18) +
         "\" text-anchor=\"middle\">" + std::to_string(decade) + "</text>\n";
  }
  s += "<text x=\"" + format2(kLeft + plot_w / 2) + "\" y=\"" + format2(kHeight - 16) +
       "\" text-anchor=\"middle\">T (log scale)</text>\n";
  s += "<text transform=\"translate(18 " + format2(kTop + plot_h / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">average loss</text>\n";
  s += "</g>\n";

  for (std::size_t l = 0; l < reports.size(); ++l) {
    const auto& r = reports[l];
    const std::string color = kPalette[l % (sizeof kPalette / sizeof kPalette[0])];
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
    for (std::size_t c = 0; c < r.checkpoints.size(); ++c) {
      if (c > 0) s += ' ';
      s += format2(px(r.checkpoints[c])) + "," + format2(py(r.mean[c]));
    }
    s += "\"><title>" + xml_escape(r.learner) + "</title></polyline>\n";
    const double ly = kTop + 12 + 20.0 * static_cast<double>(l);
    const double lx = kLeft + plot_w + 16;
    s += "<line x1=\"" + format2(lx) + "\" y1=\"" + format2(ly) + "\" x2=\"" + format2(lx + 24) +
         "\" y2=\"" + format2(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + format2(lx + 30) + "\" y=\"" + format2(ly + 4) + "\">" +
         xml_escape(r.learner) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace capnn
