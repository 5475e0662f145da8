#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <string>

namespace wmforge {

enum class DatasetId { kMnist, kCifar10 };
enum class Split { kTrain, kTest };

DatasetId dataset_from_string(const std::string& name);
std::string to_string(DatasetId id);

/// A labeled image batch. Pixels are float32 (N,C,H,W) in [0,1], labels int64 (N).
struct ImageBatch {
  torch::Tensor pixels;
  torch::Tensor labels;

  int64_t size() const { return pixels.size(0); }
  int64_t channels() const { return pixels.size(1); }
  int64_t height() const { return pixels.size(2); }
  int64_t width() const { return pixels.size(3); }

  /// Throws std::invalid_argument if shapes, value ranges, or label ranges are off.
  void validate(int64_t num_classes = 10) const;
};

/// A pixel stencil + binary mask defining a backdoor trigger. Stamping replaces
/// masked pixels with the stencil values.
struct TriggerPattern {
  torch::Tensor stencil;  // float32 (C,H,W) in [0,1]
  torch::Tensor mask;     // float32 (C,H,W), exactly 0 or 1
  std::string name;       // "white_square" | "test_logo" | "reversed"

  void validate() const;
  int64_t active_pixels() const { return static_cast<int64_t>(mask.sum().item<float>()); }
};

/// Trigger plus the poisoning parameters used to embed a watermark.
struct WatermarkSpec {
  TriggerPattern trigger;
  int64_t target_class = 7;
  double poison_rate = 0.05;

  void validate(int64_t num_classes = 10) const;
};

/// Placement of a synthetic trigger inside the image frame.
struct TriggerGeometry {
  int side = 0;    // white square side; 0 selects ceil(H/7)
  int margin = 0;  // pixels between trigger and the image border
  std::string anchor = "bottom_right";  // bottom_right|bottom_left|top_right|top_left
};

std::filesystem::path default_data_dir();

/// Loads a full split in its canonical public binary format.
/// mnist -> (N,1,28,28), cifar10 -> (N,3,32,32); throws with the offending
/// file path if data is missing or corrupt.
ImageBatch load_dataset(DatasetId name, Split split,
                        const std::filesystem::path& data_dir = default_data_dir());

/// out = mask*stencil + (1-mask)*in, clipped to [0,1]; labels unchanged.
ImageBatch stamp(const ImageBatch& batch, const TriggerPattern& trigger);

/// Samples ceil(poison_rate*N) images uniformly without replacement, stamps
/// them and relabels everything to spec.target_class. Deterministic in seed.
ImageBatch make_watermark_set(const ImageBatch& train, const WatermarkSpec& spec, uint64_t seed);

/// Uniform without-replacement sample of ceil(fraction*N) images, labels kept.
ImageBatch subsample(const ImageBatch& train, double fraction, uint64_t seed);

ImageBatch concat(const ImageBatch& a, const ImageBatch& b);

TriggerPattern white_square_trigger(int64_t channels, int64_t height, int64_t width,
                                    const TriggerGeometry& geometry = {});

/// Builds a trigger from a monochrome PNG stencil, scaled to target_height
/// (default ceil(H/3), clamped so the logo fits) and anchored per geometry.
TriggerPattern logo_trigger(const std::filesystem::path& stencil_png, int64_t channels,
                            int64_t height, int64_t width, int target_height = 0,
                            const TriggerGeometry& geometry = {});

/// Plain-text key-value trigger description (keys: name, side, margin, anchor, asset).
TriggerPattern trigger_from_config(const std::filesystem::path& config_path, int64_t channels,
                                   int64_t height, int64_t width);

/// ceil(rate*n) with a guard against binary representation spill
/// (0.05*60000 must be 3000, not 3001).
int64_t scaled_count(double rate, int64_t n);

}  // namespace wmforge
