#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace kdq {

// Flat binary array records with a small self-describing header:
//   magic "KDQARR01" | u32 dtype | u32 ndim | u64 dims[ndim] | payload (LE)
// Several records may be concatenated in one file; readers consume one
// record per call.
enum class Dtype : uint32_t { f32 = 0, f64 = 1, u8 = 2 };

struct ArrayRecord {
    Dtype dtype = Dtype::f32;
    std::vector<uint64_t> shape;
    std::vector<float> f32;
    std::vector<double> f64;
    std::vector<uint8_t> u8;

    uint64_t numel() const {
        uint64_t n = 1;
        for (uint64_t d : shape) n *= d;
        return n;
    }
};

void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const float* data);
void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const double* data);
void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const uint8_t* data);

// Throws IntegrityError on bad magic/header, IoError on short reads.
ArrayRecord read_array(std::istream& in);

// true if another record header follows at the current position
bool array_follows(std::istream& in);

ArrayRecord read_array_file(const std::filesystem::path& p);
std::vector<ArrayRecord> read_all_arrays(const std::filesystem::path& p);

// Atomic text-file helpers (write to temp, rename into place).
void write_text_file_atomic(const std::filesystem::path& p, const std::string& text);
std::string read_text_file(const std::filesystem::path& p);

} // namespace kdq
