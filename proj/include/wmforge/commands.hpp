#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace wmforge {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct CommandOptions {
  std::filesystem::path config_path;
  std::filesystem::path model_path;    // detect / remove / evaluate
  std::filesystem::path report_path;   // remove: detection report; evaluate: spec sidecar
  std::optional<uint64_t> seed;        // overrides every section seed
  std::filesystem::path out_dir = "runs";
  bool quiet = false;
};

/// Train + watermark; writes checkpoint, sidecar, and manifest to a fresh run
/// directory. Exit 2 on validation problems, 1 on runtime failure.
int cmd_embed(const CommandOptions& opts);

/// Per-class trigger reversing; writes report.json, trigger PNG/.trig pairs,
/// the perturbation table (txt + csv), and the manifest. Exits nonzero only
/// if every class fails.
int cmd_detect(const CommandOptions& opts);

/// Unlearning fine-tune driven by a detection report; refuses reports with
/// detected=false. Writes cleaned checkpoint + before/after evaluation.
int cmd_remove(const CommandOptions& opts);

/// Metrics for a model against a recorded watermark spec.
int cmd_evaluate(const CommandOptions& opts);

}  // namespace wmforge
