#pragma once

#include <torch/torch.h>

#include <filesystem>

namespace wmforge {

/// (C,H,W) float in [0,1] -> 8-bit PNG (grayscale for C=1, BGR for C=3).
void write_png(const torch::Tensor& chw, const std::filesystem::path& path);

/// PNG -> float32 (C,H,W) in [0,1]. force_gray collapses to one channel.
torch::Tensor read_png(const std::filesystem::path& path, bool force_gray = false);

/// Base64 of a file's bytes (HTML report inlining).
std::string base64_file(const std::filesystem::path& path);

}  // namespace wmforge
