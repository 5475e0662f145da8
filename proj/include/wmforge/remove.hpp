#pragma once

#include <cstdint>

#include "wmforge/data.hpp"
#include "wmforge/models.hpp"

namespace wmforge {

struct RemovalConfig {
  double data_fraction = 0.10;  // of the full training split; policy cap 0.10
  int64_t epochs = 80;
  double learning_rate = 1e-4;
  bool mix_clean = true;  // interleave the raw clean subset 1:1 per epoch
  int64_t batch_size = 64;
  uint64_t seed = 0;

  void validate() const;
};

/// Stamps every image with the reversed trigger and keeps the ground-truth
/// labels. An all-zero mask passes the input through unchanged.
ImageBatch build_unlearn_set(const ImageBatch& clean_subset, const TriggerPattern& reversed);

/// Unlearning fine-tune, in place: train on the reversed-trigger images with
/// correct labels (optionally mixed 1:1 with the raw clean subset each epoch).
/// The caller holds only the model and the clean subset.
TrainMetrics remove_watermark(Classifier& victim, const ImageBatch& clean_subset,
                              const TriggerPattern& reversed, const RemovalConfig& cfg,
                              bool quiet = false);

}  // namespace wmforge
