#include "wmforge/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wmforge/png_io.hpp"

namespace wmforge {

namespace {

uint32_t read_be32(std::istream& is, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error("truncated dataset file: " + path.string());
  }
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

std::vector<uint8_t> read_all(std::istream& is, size_t count, const std::filesystem::path& path) {
  std::vector<uint8_t> buf(count);
  if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count))) {
    throw std::runtime_error("truncated dataset file: " + path.string());
  }
  return buf;
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw std::runtime_error("missing dataset file: " + path.string());
  }
  return is;
}

ImageBatch load_mnist_split(const std::filesystem::path& dir, Split split) {
  const std::string stem = split == Split::kTrain ? "train" : "t10k";
  const auto image_path = dir / (stem + "-images-idx3-ubyte");
  const auto label_path = dir / (stem + "-labels-idx1-ubyte");

  auto img = open_binary(image_path);
  if (read_be32(img, image_path) != 2051) {
    throw std::runtime_error("bad IDX image magic: " + image_path.string());
  }
  const int64_t n = read_be32(img, image_path);
  const int64_t rows = read_be32(img, image_path);
  const int64_t cols = read_be32(img, image_path);
  auto raw = read_all(img, static_cast<size_t>(n * rows * cols), image_path);

  auto lbl = open_binary(label_path);
  if (read_be32(lbl, label_path) != 2049) {
    throw std::runtime_error("bad IDX label magic: " + label_path.string());
  }
  const int64_t n_labels = read_be32(lbl, label_path);
  if (n_labels != n) {
    throw std::runtime_error("image/label count mismatch: " + label_path.string());
  }
  auto raw_labels = read_all(lbl, static_cast<size_t>(n), label_path);

  auto pixels = torch::from_blob(raw.data(), {n, 1, rows, cols}, torch::kUInt8)
                    .to(torch::kFloat32)
                    .div_(255.0f);
  auto labels = torch::from_blob(raw_labels.data(), {n}, torch::kUInt8).to(torch::kInt64);
  return {pixels.clone().contiguous(), labels.clone()};
}

ImageBatch load_cifar_split(const std::filesystem::path& dir, Split split) {
  constexpr int64_t kRecord = 1 + 3 * 32 * 32;
  std::vector<std::filesystem::path> files;
  if (split == Split::kTrain) {
    for (int i = 1; i <= 5; ++i) {
      files.push_back(dir / ("data_batch_" + std::to_string(i) + ".bin"));
    }
  } else {
    files.push_back(dir / "test_batch.bin");
  }

  std::vector<uint8_t> raw;
  for (const auto& f : files) {
    auto is = open_binary(f);
    is.seekg(0, std::ios::end);
    const auto bytes = static_cast<size_t>(is.tellg());
    is.seekg(0);
    if (bytes == 0 || bytes % kRecord != 0) {
      throw std::runtime_error("corrupt CIFAR batch (size not a record multiple): " + f.string());
    }
    auto chunk = read_all(is, bytes, f);
    raw.insert(raw.end(), chunk.begin(), chunk.end());
  }

  const int64_t n = static_cast<int64_t>(raw.size()) / kRecord;
  auto records = torch::from_blob(raw.data(), {n, kRecord}, torch::kUInt8);
  auto labels = records.narrow(1, 0, 1).squeeze(1).to(torch::kInt64);
  auto pixels = records.narrow(1, 1, kRecord - 1)
                    .reshape({n, 3, 32, 32})
                    .to(torch::kFloat32)
                    .div_(255.0f);
  return {pixels.clone().contiguous(), labels.clone()};
}

void place_rect(torch::Tensor& mask, const TriggerGeometry& geo, int64_t trig_h, int64_t trig_w) {
  const int64_t h = mask.size(1);
  const int64_t w = mask.size(2);
  if (trig_h + geo.margin > h || trig_w + geo.margin > w) {
    throw std::invalid_argument("trigger does not fit inside the image frame");
  }
  int64_t r0, c0;
  if (geo.anchor == "bottom_right") {
    r0 = h - geo.margin - trig_h;
    c0 = w - geo.margin - trig_w;
  } else if (geo.anchor == "bottom_left") {
    r0 = h - geo.margin - trig_h;
    c0 = geo.margin;
  } else if (geo.anchor == "top_right") {
    r0 = geo.margin;
    c0 = w - geo.margin - trig_w;
  } else if (geo.anchor == "top_left") {
    r0 = geo.margin;
    c0 = geo.margin;
  } else {
    throw std::invalid_argument("unknown trigger anchor: " + geo.anchor);
  }
  mask.index_put_({torch::indexing::Slice(),
                   torch::indexing::Slice(r0, r0 + trig_h),
                   torch::indexing::Slice(c0, c0 + trig_w)},
                  1.0f);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

DatasetId dataset_from_string(const std::string& name) {
  if (name == "mnist") return DatasetId::kMnist;
  if (name == "cifar10") return DatasetId::kCifar10;
  throw std::invalid_argument("unknown dataset: " + name + " (expected mnist or cifar10)");
}

std::string to_string(DatasetId id) {
  return id == DatasetId::kMnist ? "mnist" : "cifar10";
}

void ImageBatch::validate(int64_t num_classes) const {
  if (!pixels.defined() || !labels.defined()) {
    throw std::invalid_argument("ImageBatch: undefined tensors");
  }
  if (pixels.dim() != 4 || pixels.size(0) < 1) {
    throw std::invalid_argument("ImageBatch: pixels must be (N,C,H,W) with N >= 1");
  }
  if (labels.dim() != 1 || labels.size(0) != pixels.size(0)) {
    throw std::invalid_argument("ImageBatch: labels must be (N)");
  }
  if (pixels.scalar_type() != torch::kFloat32 || labels.scalar_type() != torch::kInt64) {
    throw std::invalid_argument("ImageBatch: expected float32 pixels and int64 labels");
  }
  const float lo = pixels.min().item<float>();
  const float hi = pixels.max().item<float>();
  if (lo < 0.0f || hi > 1.0f) {
    std::ostringstream os;
    os << "ImageBatch: pixel range [" << lo << ", " << hi << "] escapes [0,1]";
    throw std::invalid_argument(os.str());
  }
  const int64_t lmin = labels.min().item<int64_t>();
  const int64_t lmax = labels.max().item<int64_t>();
  if (lmin < 0 || lmax >= num_classes) {
    throw std::invalid_argument("ImageBatch: labels escape [0, K-1]");
  }
}

void TriggerPattern::validate() const {
  if (!stencil.defined() || !mask.defined() || stencil.dim() != 3 || mask.dim() != 3) {
    throw std::invalid_argument("TriggerPattern: stencil and mask must be (C,H,W)");
  }
  if (!stencil.sizes().equals(mask.sizes())) {
    throw std::invalid_argument("TriggerPattern: stencil/mask shape mismatch");
  }
  if (!mask.eq(0).logical_or(mask.eq(1)).all().item<bool>()) {
    throw std::invalid_argument("TriggerPattern: mask must be binary");
  }
  if (mask.sum().item<float>() < 1.0f) {
    throw std::invalid_argument("TriggerPattern: mask is empty, a trigger needs >= 1 pixel");
  }
  if (stencil.min().item<float>() < 0.0f || stencil.max().item<float>() > 1.0f) {
    throw std::invalid_argument("TriggerPattern: stencil values escape [0,1]");
  }
}

void WatermarkSpec::validate(int64_t num_classes) const {
  trigger.validate();
  if (target_class < 0 || target_class >= num_classes) {
    throw std::invalid_argument("WatermarkSpec: target_class out of range");
  }
  if (!(poison_rate > 0.0 && poison_rate <= 1.0)) {
    throw std::invalid_argument("WatermarkSpec: poison_rate must be in (0,1]");
  }
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("WMFORGE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "data";
}

ImageBatch load_dataset(DatasetId name, Split split, const std::filesystem::path& data_dir) {
  ImageBatch batch = name == DatasetId::kMnist
                         ? load_mnist_split(data_dir / "mnist", split)
                         : load_cifar_split(data_dir / "cifar-10-batches-bin", split);
  batch.validate();
  return batch;
}

ImageBatch stamp(const ImageBatch& batch, const TriggerPattern& trigger) {
  if (trigger.stencil.sizes() != batch.pixels.sizes().slice(1)) {
    std::ostringstream os;
    os << "stamp: trigger shape " << trigger.stencil.sizes() << " does not match batch "
       << batch.pixels.sizes();
    throw std::invalid_argument(os.str());
  }
  auto out = trigger.mask * trigger.stencil + (1.0f - trigger.mask) * batch.pixels;
  return {out.clamp_(0.0f, 1.0f), batch.labels.clone()};
}

int64_t scaled_count(double rate, int64_t n) {
  // 0.05*60000 lands at 3000.0000000000005 in binary; nudge before ceil.
  return static_cast<int64_t>(std::ceil(rate * static_cast<double>(n) - 1e-9));
}

namespace {

torch::Tensor sampled_indices(int64_t n, int64_t count, uint64_t seed) {
  std::vector<int64_t> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<size_t>(count));
  return torch::tensor(idx, torch::kInt64);
}

}  // namespace

ImageBatch make_watermark_set(const ImageBatch& train, const WatermarkSpec& spec, uint64_t seed) {
  if (train.size() < 1) {
    throw std::invalid_argument("make_watermark_set: empty training batch");
  }
  spec.validate();
  const int64_t count = scaled_count(spec.poison_rate, train.size());
  auto idx = sampled_indices(train.size(), count, seed);
  ImageBatch picked{train.pixels.index_select(0, idx), train.labels.index_select(0, idx)};
  ImageBatch stamped = stamp(picked, spec.trigger);
  stamped.labels.fill_(spec.target_class);
  return stamped;
}

ImageBatch subsample(const ImageBatch& train, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample: fraction must be in (0,1]");
  }
  if (train.size() < 1) {
    throw std::invalid_argument("subsample: empty batch");
  }
  const int64_t count = scaled_count(fraction, train.size());
  auto idx = sampled_indices(train.size(), count, seed);
  return {train.pixels.index_select(0, idx), train.labels.index_select(0, idx)};
}

ImageBatch concat(const ImageBatch& a, const ImageBatch& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  return {torch::cat({a.pixels, b.pixels}, 0), torch::cat({a.labels, b.labels}, 0)};
}

TriggerPattern white_square_trigger(int64_t channels, int64_t height, int64_t width,
                                    const TriggerGeometry& geometry) {
  const int64_t side =
      geometry.side > 0 ? geometry.side : (height + 6) / 7;  // ceil(H/7): 4 px on 28, 5 px on 32
  auto mask = torch::zeros({channels, height, width});
  place_rect(mask, geometry, side, side);
  TriggerPattern trigger{mask.clone(), mask, "white_square"};
  trigger.validate();
  return trigger;
}

TriggerPattern logo_trigger(const std::filesystem::path& stencil_png, int64_t channels,
                            int64_t height, int64_t width, int target_height,
                            const TriggerGeometry& geometry) {
  auto art = read_png(stencil_png, /*force_gray=*/true).squeeze(0);  // (h,w) in [0,1]
  const int64_t src_h = art.size(0);
  const int64_t src_w = art.size(1);

  int64_t out_h = target_height > 0 ? target_height : (height + 2) / 3;  // ~ceil(H/3)
  // Clamp the scale so the rendered logo still fits with its margin.
  double scale = static_cast<double>(out_h) / static_cast<double>(src_h);
  const double max_scale =
      static_cast<double>(width - 2 * geometry.margin) / static_cast<double>(src_w);
  scale = std::min(scale, max_scale);
  out_h = std::max<int64_t>(1, static_cast<int64_t>(src_h * scale));
  const int64_t out_w = std::max<int64_t>(1, static_cast<int64_t>(src_w * scale));

  auto scaled = torch::nn::functional::interpolate(
                    art.unsqueeze(0).unsqueeze(0),
                    torch::nn::functional::InterpolateFuncOptions()
                        .size(std::vector<int64_t>{out_h, out_w})
                        .mode(torch::kNearest))
                    .squeeze(0)
                    .squeeze(0);

  auto frame = torch::zeros({channels, height, width});
  auto mask = torch::zeros({channels, height, width});
  place_rect(mask, geometry, out_h, out_w);
  // Within the placed window, keep only the bright stencil pixels.
  auto win = mask.nonzero();
  const int64_t r0 = win.select(1, 1).min().item<int64_t>();
  const int64_t c0 = win.select(1, 2).min().item<int64_t>();
  auto logo_mask = (scaled > 0.5f).to(torch::kFloat32);
  for (int64_t ch = 0; ch < channels; ++ch) {
    frame[ch].slice(0, r0, r0 + out_h).slice(1, c0, c0 + out_w) = scaled * logo_mask;
    mask[ch].slice(0, r0, r0 + out_h).slice(1, c0, c0 + out_w) = logo_mask;
  }
  TriggerPattern trigger{frame, mask, "test_logo"};
  trigger.validate();
  return trigger;
}

TriggerPattern trigger_from_config(const std::filesystem::path& config_path, int64_t channels,
                                   int64_t height, int64_t width) {
  std::ifstream is(config_path);
  if (!is) {
    throw std::runtime_error("missing trigger config: " + config_path.string());
  }
  std::string name = "white_square";
  std::filesystem::path asset;
  TriggerGeometry geo;
  int logo_height = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(config_path.string() + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    auto key = trim(text.substr(0, eq));
    auto value = trim(text.substr(eq + 1));
    if (key == "name") {
      name = value;
    } else if (key == "side") {
      geo.side = std::stoi(value);
    } else if (key == "margin") {
      geo.margin = std::stoi(value);
    } else if (key == "anchor") {
      geo.anchor = value;
    } else if (key == "asset") {
      asset = value;
    } else if (key == "height") {
      logo_height = std::stoi(value);
    } else {
      throw std::runtime_error(config_path.string() + ":" + std::to_string(line_no) +
                               ": unknown trigger key '" + key + "'");
    }
  }
  if (name == "white_square") {
    return white_square_trigger(channels, height, width, geo);
  }
  if (name == "test_logo") {
    if (asset.empty()) {
      throw std::runtime_error(config_path.string() + ": test_logo needs an asset path");
    }
    return logo_trigger(asset, channels, height, width, logo_height, geo);
  }
  throw std::runtime_error(config_path.string() + ": unknown trigger name '" + name + "'");
}

}  // namespace wmforge
