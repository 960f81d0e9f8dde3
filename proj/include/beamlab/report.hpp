#ifndef BEAMLAB_REPORT_HPP
#define BEAMLAB_REPORT_HPP

#include <string>

#include <json.hpp>

#include "beamlab/analysis.hpp"
#include "beamlab/config.hpp"

namespace beamlab {

/// Shortest decimal that round-trips to the same double (bit-exact reports).
std::string format_double(double v);

void write_energy_csv(const std::string& path, const EnergyLedger& ledger, const TimeAxis& axis);

void write_sweep_csv(const std::string& path, const SweepReport& report);

nlohmann::ordered_json sweep_report_json(const RunConfig& cfg, const SweepReport& report);

void write_text_file(const std::string& path, const std::string& content);

} // namespace beamlab

#endif
