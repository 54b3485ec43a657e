#include "trapsnet/params.hpp"

#include <cmath>

#include "trapsnet/errors.hpp"

namespace trapsnet::nn {

Tensor& ParamStore::create(const std::string& name, int rows, int cols) {
    auto [it, inserted] = by_name_.emplace(name, Tensor(rows, cols));
    if (!inserted) throw Error("parameter already exists: " + name);
    order_.push_back(name);
    return it->second;
}

Tensor& ParamStore::get(const std::string& name) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw Error("unknown parameter: " + name);
    return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw Error("unknown parameter: " + name);
    return it->second;
}

std::size_t ParamStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto& [name, t] : by_name_) n += t.size();
    return n;
}

bool ParamStore::all_finite() const {
    for (const auto& [name, t] : by_name_)
        if (!t.all_finite()) return false;
    return true;
}

bool ParamStore::operator==(const ParamStore& o) const {
    return order_ == o.order_ && by_name_ == o.by_name_;
}

void glorot_init(Tensor& t, int fan_in, int fan_out, RngStream& rng) {
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = rng.uniform(-bound, bound);
}

void rmsprop_update(ParamStore& params, const GradMap& grads, RMSPropState& state) {
    for (const std::string& name : params.names()) {
        Tensor& p = params.get(name);
        auto acc_it = state.mean_square.find(name);
        if (acc_it == state.mean_square.end())
            acc_it = state.mean_square.emplace(name, Tensor(p.rows(), p.cols())).first;
        Tensor& acc = acc_it->second;
        if (!acc.same_shape(p))
            throw ShapeMismatch("rmsprop accumulator shape differs from parameter " + name);
        auto g_it = grads.find(name);
        for (std::size_t i = 0; i < p.size(); ++i) {
            double g = g_it == grads.end() ? 0.0 : g_it->second[i];
            acc[i] = state.decay * acc[i] + (1.0 - state.decay) * g * g;
            p[i] -= state.learning_rate * g / (std::sqrt(acc[i]) + state.epsilon);
        }
    }
}

double clip_global_norm(GradMap& grads, double clip_norm) {
    double sq = 0.0;
    for (const auto& [name, g] : grads)
        for (std::size_t i = 0; i < g.size(); ++i) sq += g[i] * g[i];
    double norm = std::sqrt(sq);
    if (clip_norm > 0.0 && norm > clip_norm) {
        double s = clip_norm / norm;
        for (auto& [name, g] : grads)
            for (std::size_t i = 0; i < g.size(); ++i) g[i] *= s;
    }
    return norm;
}

} // namespace trapsnet::nn
