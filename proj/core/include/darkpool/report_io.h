#pragma once

#include <string>

#include "darkpool/analysis.h"
#include "darkpool/core.h"
#include "darkpool/reinforcement.h"

namespace darkpool {

// Pretty-printed JSON (two-space indent, keys sorted) for the diagnostic
// reports. Doubles are written with round-trip precision.

std::string report_json(const ConditionReport& report);
std::string report_json(const SpectralReport& report);
std::string report_json(const CltAnalysis& report);
std::string report_json(const RateReport& report);
std::string report_json(const EquilibriumResult& report);
std::string report_json(const ScheduleReport& report);

}  // namespace darkpool
