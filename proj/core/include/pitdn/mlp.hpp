#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pitdn/jet.hpp"

namespace pitdn {

// Fully connected tanh network; the last layer is affine.  First layer width
// must be 2 (the two scalar coordinates), last must be 1.
struct MlpConfig {
  std::vector<int> layer_sizes{2, 10, 10, 10, 1};
  uint64_t seed = 0;
};

void validate_layer_sizes(const std::vector<int>& sizes);

std::size_t mlp_param_count(const std::vector<int>& sizes);

// Flat parameter array plus the layer shapes needed to interpret it.  Layout
// is per layer: row-major weight block [out x in] followed by the bias block,
// layers in order.
struct ParamVector {
  std::vector<int> layer_sizes;
  std::vector<double> values;
  uint64_t seed = 0;

  std::size_t size() const { return values.size(); }
  int n_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  // layer index in [1, n_layers]
  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const;
  std::span<double> weights(int layer);
  std::span<const double> weights(int layer) const;
  std::span<double> biases(int layer);
  std::span<const double> biases(int layer) const;
};

// One layer's blocks, produced by unflatten and consumed by flatten.
struct LayerBlocks {
  int out = 0, in = 0;
  std::vector<double> weights;  // row-major [out x in]
  std::vector<double> biases;   // [out]
};

std::vector<LayerBlocks> unflatten(const ParamVector& p);
ParamVector flatten(const std::vector<LayerBlocks>& layers, uint64_t seed);

// Xavier/Glorot uniform weights with limit sqrt(6 / (fan_in + fan_out)),
// zero biases.  Deterministic for a given seed.
ParamVector init_xavier(const MlpConfig& config);

namespace detail {
template <class S>
Jet2T<S> jet_scale_const(const Jet2& a, const S& w) {
  return {a.v * w, a.dx * w, a.dt * w, a.dxx * w, a.dxt * w};
}
}  // namespace detail

// Network forward pass on jets.  The coordinate jets are constants with
// respect to the parameters; the scalar type of the parameters decides
// whether the call is a plain evaluation (double) or a recorded one (Var).
// Every channel of the result is the true partial derivative of the network
// output under the seeding of x and t.
template <class S>
Jet2T<S> mlp_forward(std::span<const int> sizes, std::span<const S> params,
                     const Jet2& x, const Jet2& t) {
  const int n_layers = static_cast<int>(sizes.size()) - 1;
  if (n_layers < 1 || sizes[0] != 2)
    throw std::invalid_argument("mlp_forward: layer sizes must start at width 2");
  std::size_t expect = 0;
  for (int l = 1; l <= n_layers; ++l)
    expect += static_cast<std::size_t>(sizes[l]) * sizes[l - 1] + sizes[l];
  if (params.size() != expect)
    throw std::invalid_argument("mlp_forward: parameter count mismatch");

  std::size_t off = 0;
  std::vector<Jet2T<S>> cur, nxt;
  // first layer reads the two coordinate jets
  {
    const int out = sizes[1];
    cur.reserve(out);
    for (int i = 0; i < out; ++i) {
      Jet2T<S> z = detail::jet_scale_const(x, params[off + 2 * i]) +
                   detail::jet_scale_const(t, params[off + 2 * i + 1]);
      z = z + params[off + static_cast<std::size_t>(out) * 2 + i];
      cur.push_back(n_layers == 1 ? z : tanh(z));
    }
    off += static_cast<std::size_t>(out) * 2 + out;
  }
  for (int l = 2; l <= n_layers; ++l) {
    const int in = sizes[l - 1], out = sizes[l];
    nxt.clear();
    nxt.reserve(out);
    for (int i = 0; i < out; ++i) {
      Jet2T<S> z = cur[0] * params[off + static_cast<std::size_t>(i) * in];
      for (int j = 1; j < in; ++j)
        z = z + cur[j] * params[off + static_cast<std::size_t>(i) * in + j];
      z = z + params[off + static_cast<std::size_t>(out) * in + i];
      nxt.push_back(l == n_layers ? z : tanh(z));
    }
    cur.swap(nxt);
    off += static_cast<std::size_t>(out) * in + out;
  }
  if (static_cast<int>(cur.size()) != 1)
    throw std::invalid_argument("mlp_forward: last layer width must be 1");
  return cur[0];
}

// Convenience wrapper over a ParamVector.
Jet2 mlp_forward(const ParamVector& p, const Jet2& x, const Jet2& t);

// Reusable forward/backward evaluator for the double-valued jet pass.  The
// forward stores pre-activations so that backward can accumulate the exact
// gradient of any linear functional of the output channels with respect to
// the parameters.  One instance is not reentrant: backward consumes the
// state of the preceding forward.
class MlpEval {
 public:
  explicit MlpEval(std::vector<int> sizes);

  Jet2 forward(std::span<const double> params, const Jet2& x, const Jet2& t);

  // Accumulates d(sum_c adj.c * out.c)/d(params) into grad (same layout as
  // ParamVector.values).  params must be the array forward saw.
  void backward(std::span<const double> params, const Jet2& out_adj,
                std::span<double> grad);

  const std::vector<int>& sizes() const { return sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> w_off_, b_off_;
  std::vector<std::vector<Jet2>> z_;   // pre-activations per layer, z_[l-1]
  std::vector<std::vector<Jet2>> h_;   // activations; h_[0] = inputs
  std::vector<Jet2> hbar_, zbar_;      // scratch adjoints
};

// Checkpoint format (little-endian throughout):
//   bytes 0..7   magic "PITDNNET"
//   u32          format version (1)
//   u32          number of sizes entries
//   u32 * n      layer sizes
//   u64          init seed
//   u64          parameter count
//   f64 * count  flat parameter array (ParamVector layout)
void save_checkpoint(const std::string& path, const ParamVector& p);
ParamVector load_checkpoint(const std::string& path);

}  // namespace pitdn
