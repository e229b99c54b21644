#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace kdq {

// Dense row-major float tensor. Deliberately minimal: layers index into the
// flat buffer themselves.
struct Tensor {
    std::vector<int> shape;
    std::vector<float> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s)
        : shape(std::move(s)), data(numel_of(shape), 0.0f) {}

    static size_t numel_of(const std::vector<int>& s) {
        size_t n = 1;
        for (int d : s) n *= size_t(d);
        return n;
    }

    size_t numel() const { return data.size(); }
    int dim(size_t i) const { return shape[i]; }

    float* ptr() { return data.data(); }
    const float* ptr() const { return data.data(); }

    void fill(float v) { std::fill(data.begin(), data.end(), v); }

    void resize(std::vector<int> s) {
        shape = std::move(s);
        data.assign(numel_of(shape), 0.0f);
    }
};

} // namespace kdq
