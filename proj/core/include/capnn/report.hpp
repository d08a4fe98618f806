#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "capnn/harness.hpp"
#include "capnn/partitions.hpp"

namespace capnn {

// Provenance stamped into every output file.
struct OutputMeta {
  std::string command;
  std::string preset;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  // Canonical config text, echoed verbatim into JSON.
  std::string config_text;
};

// Fixed six-decimal rendering used by every CSV.
std::string format_fixed(double value);
std::string hex64(std::uint64_t value);

// "# capnn <version> seed=<seed> config_hash=<hex> ..." line.
std::string meta_comment(const OutputMeta& meta);

// Columns T,learner,mean_loss,q10,q90.
void write_report_csv(std::ostream& out, const std::vector<AggregateReport>& reports,
                      const OutputMeta& meta);
std::string report_json(const std::vector<AggregateReport>& reports, const OutputMeta& meta);
std::string run_report_json(const RunReport& report);

// Columns T,cells,ratio; verdict in the comment trailer.
void write_smv_csv(std::ostream& out, const PartitionSpec& partition, const SmvReport& report,
                   const OutputMeta& meta);
std::string smv_json(const PartitionSpec& partition, const SmvReport& report,
                     const OutputMeta& meta);

// One row per (trial, checkpoint): trial,seed,T,hits,frequency.
struct CrfTrial {
  std::uint64_t seed = 0;
  std::vector<FrequencyPoint> curve;
};
void write_crf_csv(std::ostream& out, const IntervalSet& set, const std::vector<CrfTrial>& trials,
                   const OutputMeta& meta);
std::string crf_json(const IntervalSet& set, const std::vector<CrfTrial>& trials,
                     const OutputMeta& meta);

// Average loss against T on a log-x axis, one polyline per learner.
std::string loss_curve_svg(const std::vector<AggregateReport>& reports, const OutputMeta& meta);

}  // namespace capnn
