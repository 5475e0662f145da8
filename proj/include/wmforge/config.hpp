#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "wmforge/data.hpp"
#include "wmforge/detect.hpp"
#include "wmforge/models.hpp"
#include "wmforge/remove.hpp"

namespace wmforge {

/// Configuration or CLI validation failure; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One run configuration: sections [dataset] [trigger] [embed] [detect]
/// [remove] [eval] in a plain-text key=value file. Unknown sections or keys
/// are errors; every field has a default and may be omitted.
struct RunConfig {
  // [dataset]
  DatasetId dataset = DatasetId::kMnist;
  std::filesystem::path data_dir;  // empty -> $WMFORGE_DATA_DIR or ./data

  // [trigger]
  std::string trigger_name = "white_square";  // white_square | test_logo
  TriggerGeometry trigger_geometry;
  int logo_height = 0;  // 0 -> ceil(H/3)
  std::filesystem::path logo_asset;  // default: assets/test_logo.png next to the binary

  // [embed]
  int64_t target_class = 7;
  double poison_rate = 0.05;
  TrainConfig embed_train;     // epochs 0 -> 80 (mnist) / 100 (cifar10)
  double train_fraction = 1.0; // desk-scale subset of the training split

  // [detect]
  DetectConfig detect;

  // [remove]
  RemovalConfig remove;

  // [eval]
  bool eval_exclude_target_class = false;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_string(const std::string& text, const std::string& origin = "<string>");

  /// Full validation with section.key paths in error messages.
  void validate() const;

  /// Canonical key=value rendering of every effective field (defaults filled
  /// in); feeds config digests and the run manifest.
  std::string canonical_text() const;

  int64_t default_embed_epochs() const;
  Architecture architecture_for_dataset() const;
  TriggerPattern build_trigger(int64_t channels, int64_t height, int64_t width) const;
  std::filesystem::path resolved_data_dir() const;
};

}  // namespace wmforge
