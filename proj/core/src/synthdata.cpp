#include "kdq/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kdq/array_io.hpp"
#include "kdq/errors.hpp"
#include "kdq/rng.hpp"

namespace kdq::synthdata {

using nlohmann::json;

namespace {

constexpr int kManifestSchemaVersion = 1;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Composite foreground shape: regular polygon with a circular hole near one
// vertex. Vertex count carries the class identity; everything else varies per
// sample.
struct Shape {
    Vec2 center;
    double radius = 1.0;       // circumradius
    double rotation = 0.0;
    int vertices = 3;
    double hole_offset = 0.45; // relative to radius
    double hole_radius = 0.28; // relative to radius
};

bool inside_polygon(const Shape& s, double px, double py) {
    double prev_x = 0.0, prev_y = 0.0;
    bool first = true;
    double sign = 0.0;
    for (int j = 0; j <= s.vertices; ++j) {
        double a = s.rotation + 2.0 * M_PI * double(j % s.vertices) / double(s.vertices);
        double vx = s.center.x + s.radius * std::cos(a);
        double vy = s.center.y + s.radius * std::sin(a);
        if (!first) {
            double cross = (vx - prev_x) * (py - prev_y) - (vy - prev_y) * (px - prev_x);
            if (cross != 0.0) {
                if (sign == 0.0) {
                    sign = cross;
                } else if ((cross > 0.0) != (sign > 0.0)) {
                    return false;
                }
            }
        }
        prev_x = vx;
        prev_y = vy;
        first = false;
    }
    return true;
}

bool inside_shape(const Shape& s, double px, double py) {
    if (!inside_polygon(s, px, py)) return false;
    double ha = s.rotation;
    double hx = s.center.x + s.hole_offset * s.radius * std::cos(ha);
    double hy = s.center.y + s.hole_offset * s.radius * std::sin(ha);
    double hr = s.hole_radius * s.radius;
    double dx = px - hx, dy = py - hy;
    return dx * dx + dy * dy > hr * hr;
}

void rasterize_mask(const Shape& s, int size, std::vector<uint8_t>& mask) {
    mask.assign(size_t(size) * size_t(size), 0);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            if (inside_shape(s, x + 0.5, y + 0.5))
                mask[size_t(y) * size_t(size) + size_t(x)] = 1;
        }
    }
}

double mask_fraction(const std::vector<uint8_t>& mask) {
    size_t c = 0;
    for (uint8_t v : mask) c += v;
    return double(c) / double(mask.size());
}

// Finds a circumradius whose rasterized area fraction lands inside
// [range.first, range.second], near the target. Fraction is monotone in the
// radius, so bisection on the continuous radius converges onto the step.
double fit_radius(Shape s, int size, double target,
                  const std::pair<double, double>& range,
                  std::vector<uint8_t>& mask) {
    int vertices = s.vertices;
    double c_v = 0.5 * vertices * std::sin(2.0 * M_PI / vertices) -
                 M_PI * s.hole_radius * s.hole_radius;
    double n_px = double(size) * double(size);
    double r0 = std::sqrt(target * n_px / c_v);

    double lo = 0.4 * r0, hi = std::min(1.8 * r0, 0.49 * size * M_SQRT2 * 2.0);
    double best_r = r0;
    for (int it = 0; it < 48; ++it) {
        double r = 0.5 * (lo + hi);
        s.radius = r;
        rasterize_mask(s, size, mask);
        double frac = mask_fraction(mask);
        if (frac >= range.first && frac <= range.second) {
            best_r = r;
            // keep narrowing toward the target for tighter spread
            if (std::abs(frac - target) < 0.01) return r;
        }
        if (frac < target)
            lo = r;
        else
            hi = r;
    }
    s.radius = best_r;
    rasterize_mask(s, size, mask);
    double frac = mask_fraction(mask);
    if (frac < range.first || frac > range.second)
        throw Error("foreground area fitting failed (fraction " +
                    std::to_string(frac) + ")");
    return best_r;
}

ImageSample make_sample(const DatasetSpec& spec, int label, int index) {
    Rng rng(derive_seed(spec.seed, {0x5a17, uint64_t(label), uint64_t(index)}));
    const int size = spec.image_size;
    const int ch = spec.channels;

    Shape shape;
    shape.vertices = 3 + label % 6;
    shape.rotation = rng.uniform(0.0, 2.0 * M_PI);
    double range_w = spec.fg_area_range.second - spec.fg_area_range.first;
    double target = rng.uniform(spec.fg_area_range.first + 0.2 * range_w,
                                spec.fg_area_range.second - 0.2 * range_w);

    // rough radius bound so the shape fits; center jitter inside the margin
    double c_v = 0.5 * shape.vertices * std::sin(2.0 * M_PI / shape.vertices) -
                 M_PI * shape.hole_radius * shape.hole_radius;
    double r_guess = std::sqrt(spec.fg_area_range.second * size * size / c_v);
    double margin = std::min(0.5 * size, r_guess + 1.0);
    double slack = std::max(0.0, size - 2.0 * margin);
    shape.center.x = margin + rng.uniform(0.0, 1.0) * slack;
    shape.center.y = margin + rng.uniform(0.0, 1.0) * slack;

    ImageSample sample;
    sample.label = label;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%05d", label * spec.images_per_class + index);
    sample.id = buf;

    shape.radius = fit_radius(shape, size, target, spec.fg_area_range, sample.fg_mask);
    sample.fg_fraction = mask_fraction(sample.fg_mask);

    // background: dim base + class-independent clutter blobs
    std::vector<float> gray(size_t(size) * size_t(size), 0.0f);
    double bg_base = rng.uniform(0.12, 0.22);
    for (auto& v : gray) v = float(bg_base);

    int n_blobs = int(rng.uniform_int(2, 4));
    for (int bidx = 0; bidx < n_blobs; ++bidx) {
        double bx = rng.uniform(0.0, double(size));
        double by = rng.uniform(0.0, double(size));
        double br = rng.uniform(1.5, 4.5);
        double amp = rng.uniform(0.08, 0.22);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                double dx = x + 0.5 - bx, dy = y + 0.5 - by;
                double d2 = (dx * dx + dy * dy) / (br * br);
                if (d2 < 9.0)
                    gray[size_t(y) * size_t(size) + size_t(x)] +=
                        float(amp * std::exp(-d2));
            }
        }
    }

    // foreground: bright body with a gentle ramp, class-independent intensity
    double fg_base = rng.uniform(0.62, 0.88);
    double ramp_angle = rng.uniform(0.0, 2.0 * M_PI);
    double rx = std::cos(ramp_angle) / size, ry = std::sin(ramp_angle) / size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            size_t i = size_t(y) * size_t(size) + size_t(x);
            if (sample.fg_mask[i]) {
                double ramp = 0.08 * ((x + 0.5) * rx + (y + 0.5) * ry);
                gray[i] = float(fg_base + ramp);
            }
        }
    }

    // pixel noise everywhere
    double amp = 0.25 * spec.noise_level;
    Tensor px({ch, size, size});
    for (int c = 0; c < ch; ++c) {
        double tint = (c == 0) ? 1.0 : rng.uniform(0.85, 1.0);
        for (size_t i = 0; i < gray.size(); ++i) {
            double v = gray[i] * tint;
            if (amp > 0.0) v += rng.uniform(-amp, amp);
            px.data[size_t(c) * gray.size() + i] =
                float(std::clamp(v, 0.0, 1.0));
        }
    }
    sample.pixels = std::move(px);
    return sample;
}

} // namespace

void validate(const DatasetSpec& spec) {
    if (spec.num_classes < 2)
        throw ValidationError("num_classes: must be >= 2");
    if (spec.images_per_class < 1)
        throw ValidationError("images_per_class: must be >= 1");
    if (spec.image_size < 8)
        throw ValidationError("image_size: must be >= 8");
    if (spec.channels != 1 && spec.channels != 3)
        throw ValidationError("channels: must be 1 or 3");
    auto [lo, hi] = spec.fg_area_range;
    if (!(lo > 0.0 && lo < 1.0) || !(hi > 0.0 && hi < 1.0))
        throw ValidationError("fg_area_range: bounds must lie in (0,1)");
    if (!(lo < hi))
        throw ValidationError("fg_area_range: min must be < max");
    if (!(spec.noise_level >= 0.0 && spec.noise_level < 1.0))
        throw ValidationError("noise_level: must lie in [0,1)");
}

Dataset generate_dataset(const DatasetSpec& spec) {
    validate(spec);
    Dataset ds;
    ds.spec = spec;
    ds.samples.reserve(size_t(spec.num_classes) * size_t(spec.images_per_class));
    for (int label = 0; label < spec.num_classes; ++label)
        for (int i = 0; i < spec.images_per_class; ++i)
            ds.samples.push_back(make_sample(spec, label, i));
    return ds;
}

std::pair<std::vector<size_t>, std::vector<size_t>>
split_dataset(const Dataset& ds, double train_fraction, uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("train_fraction: must lie in (0,1)");

    std::vector<std::vector<size_t>> by_label;
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        size_t label = size_t(ds.samples[i].label);
        if (by_label.size() <= label) by_label.resize(label + 1);
        by_label[label].push_back(i);
    }

    std::vector<size_t> train, val;
    for (size_t label = 0; label < by_label.size(); ++label) {
        auto& idx = by_label[label];
        if (idx.empty()) continue;
        Rng rng(derive_seed(seed, {0x5f117, label}));
        rng.shuffle(idx);
        auto n = size_t(std::llround(train_fraction * double(idx.size())));
        if (idx.size() >= 2) n = std::clamp<size_t>(n, 1, idx.size() - 1);
        train.insert(train.end(), idx.begin(), idx.begin() + std::ptrdiff_t(n));
        val.insert(val.end(), idx.begin() + std::ptrdiff_t(n), idx.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    return {std::move(train), std::move(val)};
}

static json spec_to_json_obj(const DatasetSpec& s) {
    return json{{"num_classes", s.num_classes},
                {"images_per_class", s.images_per_class},
                {"image_size", s.image_size},
                {"channels", s.channels},
                {"fg_area_range", {s.fg_area_range.first, s.fg_area_range.second}},
                {"noise_level", s.noise_level},
                {"seed", s.seed}};
}

static DatasetSpec spec_from_json_obj(const json& j) {
    DatasetSpec s;
    s.num_classes = j.value("num_classes", s.num_classes);
    s.images_per_class = j.value("images_per_class", s.images_per_class);
    s.image_size = j.value("image_size", s.image_size);
    s.channels = j.value("channels", s.channels);
    if (j.contains("fg_area_range")) {
        auto a = j.at("fg_area_range");
        s.fg_area_range = {a.at(0).get<double>(), a.at(1).get<double>()};
    }
    s.noise_level = j.value("noise_level", s.noise_level);
    s.seed = j.value("seed", s.seed);
    return s;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) {
    return spec_to_json_obj(spec).dump(2);
}

DatasetSpec dataset_spec_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("dataset spec: bad JSON: ") + e.what());
    }
    return spec_from_json_obj(j);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "samples");

    json manifest;
    manifest["schema_version"] = kManifestSchemaVersion;
    manifest["spec"] = spec_to_json_obj(ds.spec);
    json samples = json::array();

    for (const auto& s : ds.samples) {
        std::string rel = "samples/" + s.id + ".arr";
        std::ofstream out(dir / rel, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + (dir / rel).string());
        const auto& sh = s.pixels.shape;
        write_array(out, {uint64_t(sh[0]), uint64_t(sh[1]), uint64_t(sh[2])},
                    s.pixels.ptr());
        write_array(out, {uint64_t(sh[1]), uint64_t(sh[2])}, s.fg_mask.data());
        samples.push_back(json{{"id", s.id},
                               {"label", s.label},
                               {"file", rel},
                               {"fg_fraction", s.fg_fraction}});
    }
    manifest["samples"] = std::move(samples);
    write_text_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const std::filesystem::path& dir) {
    json manifest;
    try {
        manifest = json::parse(read_text_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw IntegrityError(std::string("manifest: bad JSON: ") + e.what());
    }
    int version = manifest.value("schema_version", -1);
    if (version != kManifestSchemaVersion)
        throw IntegrityError("manifest: unsupported schema_version " +
                             std::to_string(version));

    Dataset ds;
    ds.spec = spec_from_json_obj(manifest.at("spec"));
    for (const auto& rec : manifest.at("samples")) {
        ImageSample s;
        s.id = rec.at("id").get<std::string>();
        s.label = rec.at("label").get<int>();
        s.fg_fraction = rec.at("fg_fraction").get<double>();
        auto arrays = read_all_arrays(dir / rec.at("file").get<std::string>());
        if (arrays.size() != 2 || arrays[0].dtype != Dtype::f32 ||
            arrays[1].dtype != Dtype::u8 || arrays[0].shape.size() != 3)
            throw IntegrityError("sample file layout mismatch: " + s.id);
        s.pixels.shape = {int(arrays[0].shape[0]), int(arrays[0].shape[1]),
                          int(arrays[0].shape[2])};
        s.pixels.data = std::move(arrays[0].f32);
        s.fg_mask = std::move(arrays[1].u8);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

} // namespace kdq::synthdata
