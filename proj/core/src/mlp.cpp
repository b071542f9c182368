#include "pitdn/mlp.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "pitdn/rng.hpp"

namespace pitdn {

void validate_layer_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2)
    throw std::invalid_argument("layer sizes: need at least an input and an output layer");
  if (sizes.front() != 2)
    throw std::invalid_argument("layer sizes: input width must be 2");
  if (sizes.back() != 1)
    throw std::invalid_argument("layer sizes: output width must be 1");
  for (int n : sizes)
    if (n < 1) throw std::invalid_argument("layer sizes: widths must be positive");
}

std::size_t mlp_param_count(const std::vector<int>& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l)
    n += static_cast<std::size_t>(sizes[l]) * sizes[l - 1] + sizes[l];
  return n;
}

std::size_t ParamVector::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 1; l < layer; ++l)
    off += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l - 1] + layer_sizes[l];
  return off;
}

std::size_t ParamVector::bias_offset(int layer) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(layer_sizes[layer]) * layer_sizes[layer - 1];
}

std::span<double> ParamVector::weights(int layer) {
  return {values.data() + weight_offset(layer),
          static_cast<std::size_t>(layer_sizes[layer]) * layer_sizes[layer - 1]};
}
std::span<const double> ParamVector::weights(int layer) const {
  return {values.data() + weight_offset(layer),
          static_cast<std::size_t>(layer_sizes[layer]) * layer_sizes[layer - 1]};
}
std::span<double> ParamVector::biases(int layer) {
  return {values.data() + bias_offset(layer), static_cast<std::size_t>(layer_sizes[layer])};
}
std::span<const double> ParamVector::biases(int layer) const {
  return {values.data() + bias_offset(layer), static_cast<std::size_t>(layer_sizes[layer])};
}

std::vector<LayerBlocks> unflatten(const ParamVector& p) {
  std::vector<LayerBlocks> out;
  for (int l = 1; l <= p.n_layers(); ++l) {
    LayerBlocks blk;
    blk.out = p.layer_sizes[l];
    blk.in = p.layer_sizes[l - 1];
    auto w = p.weights(l);
    auto b = p.biases(l);
    blk.weights.assign(w.begin(), w.end());
    blk.biases.assign(b.begin(), b.end());
    out.push_back(std::move(blk));
  }
  return out;
}

ParamVector flatten(const std::vector<LayerBlocks>& layers, uint64_t seed) {
  if (layers.empty()) throw std::invalid_argument("flatten: no layers");
  ParamVector p;
  p.seed = seed;
  p.layer_sizes.push_back(layers.front().in);
  for (const LayerBlocks& blk : layers) {
    if (blk.weights.size() != static_cast<std::size_t>(blk.out) * blk.in ||
        blk.biases.size() != static_cast<std::size_t>(blk.out))
      throw std::invalid_argument("flatten: block shape mismatch");
    p.layer_sizes.push_back(blk.out);
    p.values.insert(p.values.end(), blk.weights.begin(), blk.weights.end());
    p.values.insert(p.values.end(), blk.biases.begin(), blk.biases.end());
  }
  validate_layer_sizes(p.layer_sizes);
  return p;
}

ParamVector init_xavier(const MlpConfig& config) {
  validate_layer_sizes(config.layer_sizes);
  ParamVector p;
  p.layer_sizes = config.layer_sizes;
  p.seed = config.seed;
  p.values.assign(mlp_param_count(config.layer_sizes), 0.0);
  Rng rng(config.seed);
  for (int l = 1; l <= p.n_layers(); ++l) {
    const int fan_in = p.layer_sizes[l - 1], fan_out = p.layer_sizes[l];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : p.weights(l)) w = rng.uniform(-limit, limit);
    // biases stay zero
  }
  return p;
}

Jet2 mlp_forward(const ParamVector& p, const Jet2& x, const Jet2& t) {
  return mlp_forward<double>(p.layer_sizes, std::span<const double>(p.values), x, t);
}

namespace {
inline void jet_axpy(Jet2& acc, double w, const Jet2& a) {
  acc.v += w * a.v;
  acc.dx += w * a.dx;
  acc.dt += w * a.dt;
  acc.dxx += w * a.dxx;
  acc.dxt += w * a.dxt;
}
}  // namespace

MlpEval::MlpEval(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  validate_layer_sizes(sizes_);
  const int L = static_cast<int>(sizes_.size()) - 1;
  std::size_t off = 0;
  int max_width = 2;
  z_.resize(L);
  h_.resize(L + 1);
  h_[0].resize(2);
  for (int l = 1; l <= L; ++l) {
    w_off_.push_back(off);
    off += static_cast<std::size_t>(sizes_[l]) * sizes_[l - 1];
    b_off_.push_back(off);
    off += sizes_[l];
    z_[l - 1].resize(sizes_[l]);
    h_[l].resize(sizes_[l]);
    max_width = std::max(max_width, sizes_[l]);
  }
  hbar_.resize(max_width);
  zbar_.resize(max_width);
}

Jet2 MlpEval::forward(std::span<const double> params, const Jet2& x, const Jet2& t) {
  if (params.size() != mlp_param_count(sizes_))
    throw std::invalid_argument("MlpEval::forward: parameter count mismatch");
  const int L = static_cast<int>(sizes_.size()) - 1;
  h_[0][0] = x;
  h_[0][1] = t;
  for (int l = 1; l <= L; ++l) {
    const int in = sizes_[l - 1], out = sizes_[l];
    const double* W = params.data() + w_off_[l - 1];
    const double* b = params.data() + b_off_[l - 1];
    for (int i = 0; i < out; ++i) {
      Jet2 z = jet_const(b[i]);
      const double* row = W + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) jet_axpy(z, row[j], h_[l - 1][j]);
      z_[l - 1][i] = z;
      h_[l][i] = (l == L) ? z : tanh(z);
    }
  }
  return h_[L][0];
}

void MlpEval::backward(std::span<const double> params, const Jet2& out_adj,
                       std::span<double> grad) {
  if (grad.size() != mlp_param_count(sizes_))
    throw std::invalid_argument("MlpEval::backward: gradient size mismatch");
  const int L = static_cast<int>(sizes_.size()) - 1;
  zbar_[0] = out_adj;
  for (int l = L; l >= 1; --l) {
    const int in = sizes_[l - 1], out = sizes_[l];
    const double* W = params.data() + w_off_[l - 1];
    double* gW = grad.data() + w_off_[l - 1];
    double* gb = grad.data() + b_off_[l - 1];
    for (int i = 0; i < out; ++i) {
      const Jet2& zb = zbar_[i];
      gb[i] += zb.v;
      double* grow = gW + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        const Jet2& hj = h_[l - 1][j];
        grow[j] += zb.v * hj.v + zb.dx * hj.dx + zb.dt * hj.dt + zb.dxx * hj.dxx +
                   zb.dxt * hj.dxt;
      }
    }
    if (l == 1) break;
    for (int j = 0; j < in; ++j) {
      Jet2 hb = jet_const(0.0);
      for (int i = 0; i < out; ++i) {
        const double w = W[static_cast<std::size_t>(i) * in + j];
        jet_axpy(hb, w, zbar_[i]);
      }
      hbar_[j] = hb;
    }
    // pull the activation adjoints back through the jet-valued tanh
    for (int j = 0; j < in; ++j) {
      const double T = h_[l - 1][j].v;
      const double f1 = 1.0 - T * T;
      const double f2 = -2.0 * T * f1;
      const double f3 = -2.0 * f1 * (1.0 - 3.0 * T * T);
      const Jet2& z = z_[l - 2][j];
      const Jet2& hb = hbar_[j];
      Jet2 zb;
      zb.v = hb.v * f1 + hb.dx * f2 * z.dx + hb.dt * f2 * z.dt +
             hb.dxx * (f3 * z.dx * z.dx + f2 * z.dxx) +
             hb.dxt * (f3 * z.dx * z.dt + f2 * z.dxt);
      zb.dx = hb.dx * f1 + hb.dxx * 2.0 * f2 * z.dx + hb.dxt * f2 * z.dt;
      zb.dt = hb.dt * f1 + hb.dxt * f2 * z.dx;
      zb.dxx = hb.dxx * f1;
      zb.dxt = hb.dxt * f1;
      zbar_[j] = zb;
    }
  }
}

namespace {

constexpr char kMagic[8] = {'P', 'I', 'T', 'D', 'N', 'N', 'E', 'T'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ofstream& os, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}
void put_u64(std::ofstream& os, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}
void put_f64(std::ofstream& os, double d) { put_u64(os, std::bit_cast<uint64_t>(d)); }

uint32_t get_u32(std::ifstream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}
uint64_t get_u64(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}
double get_f64(std::ifstream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void save_checkpoint(const std::string& path, const ParamVector& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  put_u32(os, static_cast<uint32_t>(p.layer_sizes.size()));
  for (int n : p.layer_sizes) put_u32(os, static_cast<uint32_t>(n));
  put_u64(os, p.seed);
  put_u64(os, p.values.size());
  for (double v : p.values) put_f64(os, v);
  if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

ParamVector load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  const uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("load_checkpoint: unsupported version in " + path);
  const uint32_t n_sizes = get_u32(is);
  if (n_sizes < 2 || n_sizes > 64)
    throw std::runtime_error("load_checkpoint: implausible layer count in " + path);
  ParamVector p;
  p.layer_sizes.resize(n_sizes);
  for (uint32_t i = 0; i < n_sizes; ++i) p.layer_sizes[i] = static_cast<int>(get_u32(is));
  validate_layer_sizes(p.layer_sizes);
  p.seed = get_u64(is);
  const uint64_t count = get_u64(is);
  if (count != mlp_param_count(p.layer_sizes))
    throw std::runtime_error("load_checkpoint: parameter count mismatch in " + path);
  p.values.resize(count);
  for (uint64_t i = 0; i < count; ++i) p.values[i] = get_f64(is);
  if (!is) throw std::runtime_error("load_checkpoint: truncated file " + path);
  return p;
}

}  // namespace pitdn
