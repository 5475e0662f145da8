#pragma once

#include <filesystem>
#include <string>

#include "wmforge/data.hpp"
#include "wmforge/detect.hpp"
#include "wmforge/models.hpp"

namespace wmforge {

struct EvaluationReport {
  double basic_accuracy = 0.0;
  double basic_retention = 0.0;
  double post_accuracy = 0.0;
  double post_retention = 0.0;
  std::string dataset;
  std::string watermark_type;
  std::string config_digest;

  void validate() const;
};

/// Fraction of argmax predictions matching the labels.
double test_accuracy(Classifier& model, const ImageBatch& test);

/// S_y/S: stamp the clean test set with spec.trigger and count predictions of
/// spec.target_class. The denominator is the full stamped set unless
/// exclude_target_class removes images natively of the target class.
double retention_rate(Classifier& model, const ImageBatch& clean_test, const WatermarkSpec& spec,
                      bool exclude_target_class = false);

/// Plain-text K-column table of per-class perturbation sizes with the
/// below-threshold outlier cells flagged; incomplete rows show a gap marker.
std::string perturbation_table(const DetectionReport& report);

/// Machine-readable companion; values round-trip exactly.
std::string perturbation_table_csv(const DetectionReport& report);

void write_evaluation_report(const EvaluationReport& report, const std::filesystem::path& json_path);
EvaluationReport load_evaluation_report(const std::filesystem::path& json_path);
std::string evaluation_report_csv(const EvaluationReport& report);

/// One-page static HTML: metrics plus the reversed-trigger PNGs inlined.
void write_html_summary(const EvaluationReport& report, const DetectionReport* detection,
                        const std::filesystem::path& html_path);

}  // namespace wmforge
