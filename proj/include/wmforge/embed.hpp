#pragma once

#include <filesystem>
#include <stdexcept>

#include "wmforge/data.hpp"
#include "wmforge/models.hpp"

namespace wmforge {

/// Raised when a trained model fails the retention gate (>= 0.99 on freshly
/// stamped held-out images). Callers may retry with more epochs.
struct EmbeddingFailed : std::runtime_error {
  explicit EmbeddingFailed(const std::string& what, double retention)
      : std::runtime_error(what), retention(retention) {}
  double retention;
};

struct WatermarkedModel {
  Classifier model;
  WatermarkSpec spec;
  TrainConfig provenance;
  double basic_accuracy = 0.0;   // clean test accuracy at creation
  double basic_retention = 0.0;  // retention on freshly stamped test images
};

/// Trains `arch` on clean + poisoned data (poisoned samples appended, joint
/// shuffle every epoch) and measures the basic metrics on the held-out test
/// split. Throws EmbeddingFailed if retention lands below 0.99.
WatermarkedModel embed_watermark(Architecture arch, const ImageBatch& train,
                                 const ImageBatch& test, const WatermarkSpec& spec,
                                 const TrainConfig& cfg, bool quiet = false);

/// JSON sidecar { spec, basic_accuracy, basic_retention, seed } next to the
/// checkpoint. The trigger is stored by geometry for the synthetic patterns
/// and as a .trig reference for reversed ones.
void write_embed_sidecar(const WatermarkedModel& wm, const std::filesystem::path& json_path,
                         const std::filesystem::path& trigger_dir);

/// Rebuilds the WatermarkSpec recorded in a sidecar (image dims come from the
/// recorded dataset geometry).
WatermarkSpec load_spec_sidecar(const std::filesystem::path& json_path);

}  // namespace wmforge
