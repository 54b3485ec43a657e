#pragma once

#include <map>
#include <string>
#include <vector>

#include "trapsnet/autodiff.hpp"
#include "trapsnet/rng.hpp"
#include "trapsnet/tensor.hpp"

namespace trapsnet::nn {

/// Named parameter tensors in a stable insertion order. No tensor shape may
/// depend on the number of objects in any instance; the stores built by the
/// model layer only ever size tensors from the encoder configuration.
class ParamStore {
public:
    Tensor& create(const std::string& name, int rows, int cols);
    Tensor& get(const std::string& name);
    const Tensor& get(const std::string& name) const;
    bool has(const std::string& name) const { return by_name_.count(name) > 0; }

    const std::vector<std::string>& names() const { return order_; }
    std::size_t tensor_count() const { return order_.size(); }
    std::size_t scalar_count() const;
    bool all_finite() const;

    bool operator==(const ParamStore& o) const;

private:
    std::vector<std::string> order_;
    std::map<std::string, Tensor> by_name_;
};

/// Uniform(-b, b) with b = sqrt(6 / (fan_in + fan_out)). Entries are drawn
/// in row-major order from the given stream.
void glorot_init(Tensor& t, int fan_in, int fan_out, RngStream& rng);

struct RMSPropState {
    double decay = 0.99;
    double epsilon = 1e-8;
    double learning_rate = 1e-3;
    std::map<std::string, Tensor> mean_square;   // lazily shaped per parameter
};

/// acc <- decay*acc + (1-decay)*g^2 ; p <- p - lr*g/(sqrt(acc)+eps), applied
/// per parameter in store order. Parameters missing from `grads` are treated
/// as having zero gradient.
void rmsprop_update(ParamStore& params, const GradMap& grads, RMSPropState& state);

/// L2 norm over all gradients; scales them in place to `clip_norm` when the
/// norm exceeds it. Returns the pre-clip norm.
double clip_global_norm(GradMap& grads, double clip_norm);

} // namespace trapsnet::nn
