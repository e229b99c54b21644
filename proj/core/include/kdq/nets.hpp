#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kdq/tensor.hpp"

namespace kdq::nets {

enum class LayerId : int { FC1 = 1, FC2 = 2, FC3 = 3 };

LayerId layer_from_string(const std::string& s);
std::string to_string(LayerId id);

struct ConvBlockSpec {
    int out_channels = 8;
    int kernel = 3;
    int stride = 2;
};

struct NetSpec {
    int in_channels = 1;
    int image_size = 32;
    std::vector<ConvBlockSpec> conv_blocks{{8, 3, 2}, {16, 3, 2}};
    std::array<int, 3> fc_dims{256, 128, 2};
    std::string activation = "relu";
    uint64_t seed = 0;
};

void validate(const NetSpec& spec);

// Hash of the architecture-defining fields (seed excluded).
uint64_t architecture_hash(const NetSpec& spec);

std::string net_spec_to_json(const NetSpec& spec);
NetSpec net_spec_from_json(const std::string& json_text);

// Parameter gradients, one tensor per parameter tensor of the model, in the
// model's declaration order.
struct Grads {
    std::vector<Tensor> tensors;
};

// Small CNN: conv blocks (stride-downsampled, each followed by the
// activation) -> flatten -> FC1 -> act -> FC2 -> act -> FC3 (identity).
// feature_at returns the post-activation output of the named FC layer;
// FC3's activation is the identity, so feature_at(FC3) == logits.
class Model {
public:
    explicit Model(const NetSpec& spec);

    const NetSpec& spec() const { return spec_; }

    size_t num_params() const;
    std::vector<float> flat_params() const;
    void set_flat_params(const std::vector<float>& flat);

    std::vector<Tensor>& params() { return params_; }
    const std::vector<Tensor>& params() const { return params_; }

    // Index into params() of the first tensor of FC layer l in 1..3;
    // first_param_of_fc(4) == params().size().
    size_t first_param_of_fc(int l) const;

    int flatten_dim() const { return flatten_dim_; }

    struct Cache {
        int batch = 0;
        Tensor input;
        std::vector<Tensor> conv_out;    // post-activation per block
        std::array<Tensor, 3> fc_out;    // post-activation per FC layer
    };

    // x: [B, C, H, W]. Fills the cache through the requested layer and
    // returns its post-activation output [B, dim].
    const Tensor& forward(const Tensor& x, Cache& cache,
                          LayerId up_to = LayerId::FC3) const;

    Tensor feature_at(LayerId layer, const Tensor& x) const;
    Tensor logits(const Tensor& x) const;

    // Backward from d(post-activation of `from`), using the activations in
    // `cache`. Parameter gradients are accumulated into `grads` (when
    // non-null); input gradients go to `dinput` (when non-null).
    // FC layers <= freeze_below_fc and, when freeze_below_fc >= 1, all conv
    // blocks receive no parameter gradients; propagation stops as soon as
    // nothing below is needed.
    void backward(const Cache& cache, LayerId from, const Tensor& dfeat,
                  Grads* grads, Tensor* dinput, int freeze_below_fc = 0) const;

    Grads zero_grads() const;

private:
    NetSpec spec_;
    std::vector<Tensor> params_;
    std::vector<int> conv_sizes_;  // spatial size after each block
    int flatten_dim_ = 0;

    void conv_forward(int block, const Tensor& in, Tensor& out) const;
    void conv_backward(int block, const Tensor& in, const Tensor& dout,
                       Tensor* dw, Tensor* db, Tensor* din) const;
    void activation_inplace(Tensor& t) const;
    void activation_backward(const Tensor& post, Tensor& d) const;
};

// Training metadata per epoch; serialized into checkpoint metadata.
struct EpochStat {
    std::string phase;  // "classify" or "distill"
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

struct CheckpointSeries {
    NetSpec net_spec;
    std::vector<std::vector<float>> snapshots;  // w_0 .. w_M
    std::string metadata_json;                  // config echo + per-epoch stats
};

// File layout: magic, schema version, architecture hash, spec JSON, metadata
// JSON, snapshot count, parameter dim, f32 snapshots, FNV-1a checksum.
void save_checkpoint(const CheckpointSeries& series, const std::filesystem::path& path);
CheckpointSeries load_checkpoint(const std::filesystem::path& path);

} // namespace kdq::nets
