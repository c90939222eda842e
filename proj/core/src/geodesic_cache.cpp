#include "qgshape/geodesic.hpp"

#include <cstring>
#include <fstream>

namespace qgshape {

namespace {

// Little-endian layout (see docs/formats.md):
//   magic "QGDGEOC1" | n u64 | fingerprint u64 | n*n f64 row-major | checksum u64
constexpr char kMagic[8] = {'Q', 'G', 'D', 'G', 'E', 'O', 'C', '1'};

std::uint64_t fnv1a(const void *data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

static_assert(std::endian::native == std::endian::little,
              "cache format assumes a little-endian host");

} // namespace

void cache_write(const GeodesicMatrix &matrix, const std::string &path) {
    const std::uint64_t n = static_cast<std::uint64_t>(matrix.n());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cache_write: cannot open " + path);
    os.write(kMagic, sizeof kMagic);
    os.write(reinterpret_cast<const char *>(&n), sizeof n);
    os.write(reinterpret_cast<const char *>(&matrix.mesh_fingerprint), sizeof matrix.mesh_fingerprint);

    std::vector<double> row(n);
    std::uint64_t checksum = fnv1a(&n, sizeof n);
    checksum = fnv1a(&matrix.mesh_fingerprint, sizeof matrix.mesh_fingerprint, checksum);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) row[j] = matrix.d(i, j);
        os.write(reinterpret_cast<const char *>(row.data()), n * sizeof(double));
        checksum = fnv1a(row.data(), n * sizeof(double), checksum);
    }
    os.write(reinterpret_cast<const char *>(&checksum), sizeof checksum);
    if (!os) throw IoError("cache_write: write failed: " + path);
}

GeodesicMatrix cache_read(const std::string &path, const TriangleMesh &mesh) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FileNotFoundError(path);

    char magic[8];
    std::uint64_t n = 0, fp = 0;
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw CacheError("cache_read: bad magic in " + path);
    if (!is.read(reinterpret_cast<char *>(&n), sizeof n) ||
        !is.read(reinterpret_cast<char *>(&fp), sizeof fp))
        throw CacheError("cache_read: truncated header in " + path);

    std::uint64_t want = mesh_fingerprint(mesh);
    if (fp != want)
        throw CacheError("cache_read: fingerprint mismatch (cache does not belong to this mesh)");
    if (n != static_cast<std::uint64_t>(mesh.vertex_count()))
        throw CacheError("cache_read: size mismatch");

    GeodesicMatrix out;
    out.mesh_fingerprint = fp;
    out.d.resize(n, n);
    std::vector<double> row(n);
    std::uint64_t checksum = fnv1a(&n, sizeof n);
    checksum = fnv1a(&fp, sizeof fp, checksum);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (!is.read(reinterpret_cast<char *>(row.data()), n * sizeof(double)))
            throw CacheError("cache_read: truncated payload in " + path);
        checksum = fnv1a(row.data(), n * sizeof(double), checksum);
        for (std::uint64_t j = 0; j < n; ++j) out.d(i, j) = row[j];
    }
    std::uint64_t stored = 0;
    if (!is.read(reinterpret_cast<char *>(&stored), sizeof stored) || stored != checksum)
        throw CacheError("cache_read: checksum failure in " + path);
    return out;
}

} // namespace qgshape
