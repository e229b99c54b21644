#include "kdq/array_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kdq/errors.hpp"

namespace kdq {

namespace {

constexpr char kMagic[8] = {'K', 'D', 'Q', 'A', 'R', 'R', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "array files are little-endian; big-endian hosts are unsupported");

template <class T>
void write_raw(std::ostream& out, const T* data, size_t count) {
    out.write(reinterpret_cast<const char*>(data),
              std::streamsize(count * sizeof(T)));
    if (!out) throw IoError("array write failed");
}

template <class T>
void read_raw(std::istream& in, T* data, size_t count) {
    in.read(reinterpret_cast<char*>(data), std::streamsize(count * sizeof(T)));
    if (size_t(in.gcount()) != count * sizeof(T))
        throw IoError("array read truncated");
}

void write_header(std::ostream& out, Dtype dtype,
                  const std::vector<uint64_t>& shape) {
    out.write(kMagic, sizeof(kMagic));
    uint32_t dt = uint32_t(dtype);
    uint32_t nd = uint32_t(shape.size());
    write_raw(out, &dt, 1);
    write_raw(out, &nd, 1);
    write_raw(out, shape.data(), shape.size());
}

} // namespace

void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const float* data) {
    write_header(out, Dtype::f32, shape);
    uint64_t n = 1;
    for (uint64_t d : shape) n *= d;
    write_raw(out, data, size_t(n));
}

void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const double* data) {
    write_header(out, Dtype::f64, shape);
    uint64_t n = 1;
    for (uint64_t d : shape) n *= d;
    write_raw(out, data, size_t(n));
}

void write_array(std::ostream& out, const std::vector<uint64_t>& shape,
                 const uint8_t* data) {
    write_header(out, Dtype::u8, shape);
    uint64_t n = 1;
    for (uint64_t d : shape) n *= d;
    write_raw(out, data, size_t(n));
}

ArrayRecord read_array(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (size_t(in.gcount()) != sizeof(magic))
        throw IoError("array read truncated (missing header)");
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IntegrityError("bad array magic");

    uint32_t dt = 0, nd = 0;
    read_raw(in, &dt, 1);
    read_raw(in, &nd, 1);
    if (dt > uint32_t(Dtype::u8)) throw IntegrityError("unknown array dtype");
    if (nd > 8) throw IntegrityError("array rank too large");

    ArrayRecord rec;
    rec.dtype = Dtype(dt);
    rec.shape.resize(nd);
    read_raw(in, rec.shape.data(), nd);
    uint64_t n = rec.numel();
    if (n > (uint64_t(1) << 34)) throw IntegrityError("array too large");

    switch (rec.dtype) {
        case Dtype::f32:
            rec.f32.resize(size_t(n));
            read_raw(in, rec.f32.data(), size_t(n));
            break;
        case Dtype::f64:
            rec.f64.resize(size_t(n));
            read_raw(in, rec.f64.data(), size_t(n));
            break;
        case Dtype::u8:
            rec.u8.resize(size_t(n));
            read_raw(in, rec.u8.data(), size_t(n));
            break;
    }
    return rec;
}

bool array_follows(std::istream& in) {
    return in.peek() != std::char_traits<char>::eof();
}

ArrayRecord read_array_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open array file: " + p.string());
    return read_array(in);
}

std::vector<ArrayRecord> read_all_arrays(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open array file: " + p.string());
    std::vector<ArrayRecord> out;
    while (array_follows(in)) out.push_back(read_array(in));
    return out;
}

void write_text_file_atomic(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for write: " + tmp.string());
        out.write(text.data(), std::streamsize(text.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace kdq
