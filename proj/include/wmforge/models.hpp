#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmforge/data.hpp"

namespace wmforge {

enum class Architecture { kLenet5, kResnet18, kCustom };

Architecture architecture_from_string(const std::string& name);
std::string to_string(Architecture arch);

struct TrainConfig {
  int64_t epochs = 0;
  int64_t batch_size = 128;
  double learning_rate = 1e-3;
  uint64_t seed = 0;
  std::string optimizer = "adam";  // adam | sgd

  void validate() const;
};

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

struct LeNet5Impl : torch::nn::Module {
  explicit LeNet5Impl(int64_t num_classes = 10);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr};
  torch::nn::Linear fc1{nullptr}, fc2{nullptr}, fc3{nullptr};
};
TORCH_MODULE(LeNet5);

struct BasicBlockImpl : torch::nn::Module {
  BasicBlockImpl(int64_t in_planes, int64_t planes, int64_t stride);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr}, bn2{nullptr};
  torch::nn::Sequential shortcut;
};
TORCH_MODULE(BasicBlock);

/// ResNet-18 in its 32x32 form: 3x3 stem, no max-pool, stages [2,2,2,2].
struct ResNet18Impl : torch::nn::Module {
  explicit ResNet18Impl(int64_t num_classes = 10);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Conv2d conv1{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr};
  torch::nn::Sequential layer1, layer2, layer3, layer4;
  torch::nn::Linear fc{nullptr};

 private:
  torch::nn::Sequential make_stage(int64_t planes, int64_t stride);
  int64_t in_planes_ = 64;
};
TORCH_MODULE(ResNet18);

/// A classifier plus the metadata needed to checkpoint and rebuild it.
class Classifier {
 public:
  Classifier() = default;
  Classifier(Architecture arch, int64_t num_classes, uint64_t seed);

  /// Wraps an arbitrary module (tests, toy models). Not checkpointable.
  Classifier(torch::nn::AnyModule net, int64_t num_classes);

  torch::Tensor forward(const torch::Tensor& pixels);

  Architecture architecture() const { return arch_; }
  int64_t num_classes() const { return num_classes_; }
  uint64_t init_seed() const { return seed_; }

  std::vector<torch::Tensor> parameters() { return net_.ptr()->parameters(); }
  torch::nn::Module& module() { return *net_.ptr(); }
  const torch::nn::Module& module() const { return *net_.ptr(); }
  void train(bool on = true) { net_.ptr()->train(on); }
  void set_requires_grad(bool on);

  Classifier clone() const;

 private:
  Architecture arch_ = Architecture::kCustom;
  int64_t num_classes_ = 0;
  uint64_t seed_ = 0;
  torch::nn::AnyModule net_;
};

/// Fresh network for the named architecture; lenet5 takes (N,1,28,28),
/// resnet18 takes (N,3,32,32). Initialization is a pure function of seed.
Classifier build_classifier(Architecture arch, int64_t num_classes = 10, uint64_t seed = 0);
Classifier build_classifier(const std::string& arch, int64_t num_classes = 10, uint64_t seed = 0);

struct TrainMetrics {
  std::vector<double> epoch_losses;
  double final_loss() const { return epoch_losses.empty() ? 0.0 : epoch_losses.back(); }
};

/// Cross-entropy training, shuffled minibatches, in place. epochs=0 is a no-op.
/// Throws on divergence (non-finite loss).
TrainMetrics train_classifier(Classifier& model, const ImageBatch& data, const TrainConfig& cfg,
                              bool quiet = false);

struct Prediction {
  torch::Tensor logits;  // (N,K) float32
  torch::Tensor labels;  // (N) int64 argmax
};

/// Evaluation-mode forward pass, deterministic across calls.
Prediction predict(Classifier& model, const ImageBatch& batch, int64_t batch_size = 512);

// ---------------------------------------------------------------------------
// GAN networks
// ---------------------------------------------------------------------------

struct ResidualBlockImpl : torch::nn::Module {
  explicit ResidualBlockImpl(int64_t channels);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr};
  torch::nn::InstanceNorm2d norm1{nullptr}, norm2{nullptr};
};
TORCH_MODULE(ResidualBlock);

/// Encoder-decoder perturbation generator: 3 strided conv blocks down,
/// 4 residual blocks, 3 transposed conv blocks up, tanh output scaled to
/// [-epsilon_max, epsilon_max]. Output shape equals input shape.
struct GeneratorImpl : torch::nn::Module {
  GeneratorImpl(int64_t channels, int64_t height, int64_t width, double epsilon_max);
  torch::Tensor forward(torch::Tensor x);

  double epsilon_max() const { return epsilon_max_; }

  torch::nn::Sequential encoder, body, decoder;

 private:
  double epsilon_max_;
};
TORCH_MODULE(Generator);

/// 3 strided conv blocks + scalar sigmoid head; returns (N) scores in [0,1].
struct DiscriminatorImpl : torch::nn::Module {
  DiscriminatorImpl(int64_t channels, int64_t height, int64_t width);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Sequential features;
  torch::nn::Linear head{nullptr};
};
TORCH_MODULE(Discriminator);

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

/// Self-describing binary checkpoint: header {magic, version, architecture,
/// num_classes, seed} + named parameter/buffer blobs. Round-trips bit-exactly.
void save_checkpoint(const Classifier& model, const std::filesystem::path& path,
                     uint64_t seed = 0);

/// Rebuilds the architecture named in the header and restores all tensors.
/// Throws on magic/version/architecture mismatch.
Classifier load_checkpoint(const std::filesystem::path& path);

void save_generator(const Generator& gen, const std::filesystem::path& path);

}  // namespace wmforge
