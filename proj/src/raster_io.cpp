#include "newton_atlas/raster_io.hpp"

#include <bit>
#include <cstring>

#include "newton_atlas/errors.hpp"
#include "newton_atlas/io_util.hpp"

namespace newton_atlas {

namespace {

static_assert(std::endian::native == std::endian::little,
              "NBAS serialization assumes a little-endian host");

template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, size_t& off) {
    if (off + sizeof(T) > in.size()) throw IOFailure("NBAS: truncated file");
    T v;
    std::memcpy(&v, in.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace

void write_raster(const BasinRaster& raster, const std::string& path) {
    std::string out;
    out.reserve(56 + raster.labels.size() * 10);
    out.append("NBAS", 4);
    put<uint32_t>(out, 1);
    put<uint32_t>(out, static_cast<uint32_t>(raster.width));
    put<uint32_t>(out, static_cast<uint32_t>(raster.height));
    put<uint32_t>(out, static_cast<uint32_t>(raster.root_count));
    put<uint32_t>(out, static_cast<uint32_t>(raster.petal_count));
    put<double>(out, raster.region.center.real());
    put<double>(out, raster.region.center.imag());
    put<double>(out, raster.region.width);
    put<double>(out, raster.region.height);
    for (size_t i = 0; i < raster.labels.size(); ++i) {
        put<int16_t>(out, raster.labels[i]);
        put<int32_t>(out, raster.components[i]);
        put<int32_t>(out, raster.iterations[i]);
    }
    write_file_atomic(path, out);
}

BasinRaster read_raster(const std::string& path) {
    std::string in = read_file(path);
    if (in.size() < 56 || in.compare(0, 4, "NBAS") != 0)
        throw IOFailure("NBAS: bad magic in " + path);
    size_t off = 4;
    uint32_t version = take<uint32_t>(in, off);
    if (version != 1) throw IOFailure("NBAS: unsupported version " + std::to_string(version));
    BasinRaster r;
    r.width = static_cast<int>(take<uint32_t>(in, off));
    r.height = static_cast<int>(take<uint32_t>(in, off));
    r.root_count = static_cast<int>(take<uint32_t>(in, off));
    r.petal_count = static_cast<int>(take<uint32_t>(in, off));
    double cre = take<double>(in, off);
    double cim = take<double>(in, off);
    r.region.center = Complex(cre, cim);
    r.region.width = take<double>(in, off);
    r.region.height = take<double>(in, off);
    if (r.width <= 0 || r.height <= 0) throw IOFailure("NBAS: non-positive dimensions");
    size_t total = static_cast<size_t>(r.width) * r.height;
    r.labels.resize(total);
    r.components.resize(total);
    r.iterations.resize(total);
    int maxcomp = -1;
    for (size_t i = 0; i < total; ++i) {
        r.labels[i] = take<int16_t>(in, off);
        r.components[i] = take<int32_t>(in, off);
        r.iterations[i] = take<int32_t>(in, off);
        maxcomp = std::max(maxcomp, r.components[i]);
    }
    if (off != in.size()) throw IOFailure("NBAS: trailing bytes in " + path);
    r.component_count = maxcomp + 1;
    return r;
}

}  // namespace newton_atlas
