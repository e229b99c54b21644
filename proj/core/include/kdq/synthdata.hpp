#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kdq/tensor.hpp"

namespace kdq::synthdata {

struct DatasetSpec {
    int num_classes = 2;
    int images_per_class = 1000;
    int image_size = 32;
    int channels = 1;
    std::pair<double, double> fg_area_range{0.15, 0.35};
    double noise_level = 0.1;
    uint64_t seed = 0;
};

// Throws ValidationError naming the offending field.
void validate(const DatasetSpec& spec);

struct ImageSample {
    std::string id;
    int label = 0;
    Tensor pixels;                 // [C, H, W], values in [0, 1]
    std::vector<uint8_t> fg_mask;  // [H * W], 1 = foreground
    double fg_fraction = 0.0;
};

struct Dataset {
    DatasetSpec spec;
    std::vector<ImageSample> samples;
};

// Class identity is carried by the foreground shape family (vertex count of a
// part-composed polygon); background clutter is class-independent. Fully
// deterministic given spec.seed.
Dataset generate_dataset(const DatasetSpec& spec);

// Label-stratified split; returns (train_indices, val_indices), each sorted.
std::pair<std::vector<size_t>, std::vector<size_t>>
split_dataset(const Dataset& ds, double train_fraction, uint64_t seed);

void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

DatasetSpec dataset_spec_from_json(const std::string& json_text);
std::string dataset_spec_to_json(const DatasetSpec& spec);

} // namespace kdq::synthdata
