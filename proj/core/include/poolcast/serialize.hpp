#pragma once

#include <string>
#include <vector>

#include "poolcast/inference.hpp"
#include "poolcast/model.hpp"
#include "poolcast/optimize.hpp"

namespace poolcast {

/// Everything needed to reuse a fit later: the spec, the optimum in both
/// spaces, and the standardization that anchors the time axis.
struct SavedFit {
  ModelSpec spec;
  MapResult result;
};

std::string fit_to_json(const SavedFit& fit);
SavedFit fit_from_json(const std::string& text);

std::string trace_to_csv(const std::vector<TraceRow>& trace);

/// FNV-1a over raw bytes; hex string. Used for config hashes in the run
/// manifest.
std::string content_hash(const std::string& bytes);

}  // namespace poolcast
