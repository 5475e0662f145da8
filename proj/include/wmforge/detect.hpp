#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wmforge/data.hpp"
#include "wmforge/models.hpp"

namespace wmforge {

struct GanLossWeights {
  double lambda1 = 1.0;  // weight on the misclassification margin
  double lambda2 = 0.1;  // weight on the perturbation norm

  void validate() const;
};

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// MSE(d_real, 1) + MSE(d_fake, 0). Zero iff the discriminator is perfect.
torch::Tensor loss_gan(const torch::Tensor& d_real, const torch::Tensor& d_fake);

/// Generator side of the adversarial game: MSE(d_fake, 1).
torch::Tensor loss_gan_generator(const torch::Tensor& d_fake);

/// Targeted margin toward `assumed_class` c: mean over the batch of
/// max(max{logits_i : i != c} - logits_c, 0). Zero iff c is an argmax.
torch::Tensor loss_wm(const torch::Tensor& logits, int64_t assumed_class);

/// Margin away from the true labels: max(max{logits_i : i != t} - logits_t, 0)
/// driven to stay positive is impossible, so this form simply rewards any
/// misclassification of the true class t.
torch::Tensor loss_wm_untargeted(const torch::Tensor& logits, const torch::Tensor& true_labels);

/// Per-image L2 norm of the perturbation, averaged over the batch.
torch::Tensor loss_pert(const torch::Tensor& perturbation);

// ---------------------------------------------------------------------------
// Reversing
// ---------------------------------------------------------------------------

struct DetectConfig {
  GanLossWeights weights;
  double threshold = 9.5;          // perturbation-size cutoff T
  int64_t epochs = 60;
  int64_t batch_size = 64;
  double lr_generator = 1e-4;
  double lr_discriminator = 1e-4;
  double epsilon_max = 1.0;        // generator output bound, raw pixel units
  int64_t images_per_class = 500;  // attacker images used per assumed class
  double holdout_fraction = 0.2;   // slice reserved for the final statistic
  bool targeted = true;            // false = verbatim away-from-true-label margin
  uint64_t seed = 0;

  void validate() const;
};

struct ReverseResult {
  int64_t assumed_class = -1;
  double mean_pert_size = 0.0;     // mean per-image L2 on the held-out slice
  TriggerPattern best_trigger;     // minimal-norm final-epoch perturbation
  Generator generator{nullptr};    // trained generator, eval mode
  std::filesystem::path generator_ckpt;  // filled in once persisted
  std::filesystem::path trigger_png;     // filled in once persisted
  bool complete = false;
  std::string error;
};

struct DetectionReport {
  std::vector<ReverseResult> per_class;
  double threshold = 9.5;
  bool detected = false;
  std::optional<int64_t> detected_class;
  GanLossWeights weights;
  uint64_t seed = 0;

  const ReverseResult& result_for(int64_t cls) const;
};

/// Trains a fresh generator/discriminator pair against the frozen target to
/// steer images of other classes into `assumed_class`, then reports the mean
/// perturbation size on a held-out slice of the attacker set.
///
/// `clean` must not contain images labeled `assumed_class`. The target model
/// is restored to its incoming train/grad state on return. Throws on GAN
/// divergence (non-finite loss, or discriminator accuracy pinned at 1.0 for
/// more than a quarter of the epochs).
ReverseResult reverse_for_class(Classifier& target_model, const ImageBatch& clean,
                                int64_t assumed_class, const DetectConfig& cfg,
                                bool quiet = false);

/// Runs reverse_for_class for every class. A per-class failure is recorded in
/// that row and the remaining classes still run; detected iff the smallest
/// complete mean perturbation size falls below cfg.threshold.
DetectionReport detect_watermark(Classifier& target_model, const ImageBatch& clean,
                                 const DetectConfig& cfg, bool quiet = false);

// Report (de)serialization. Trigger tensors live in sidecar files next to the
// JSON: a PNG render for inspection plus an exact binary (.trig) used by the
// removal phase.
void write_detection_report(const DetectionReport& report, const std::filesystem::path& dir);
DetectionReport load_detection_report(const std::filesystem::path& json_path);

void save_trigger(const TriggerPattern& trigger, const std::filesystem::path& path);
TriggerPattern load_trigger(const std::filesystem::path& path);

}  // namespace wmforge
