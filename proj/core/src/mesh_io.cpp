#include "qgshape/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qgshape {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const std::string &path) {
    std::string e = fs::path(path).extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e;
}

// Reads the next non-empty, non-comment line. Returns false at EOF.
bool next_line(std::istream &in, std::string &line, long &lineno, char comment = '#') {
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t i = line.find_first_not_of(" \t\r\n");
        if (i == std::string::npos) continue;
        if (line[i] == comment) continue;
        return true;
    }
    return false;
}

void check_faces(TriangleMesh &mesh, const std::string &path) {
    const int n = mesh.vertex_count();
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto &f = mesh.faces[fi];
        for (int s = 0; s < 3; ++s)
            if (f[s] < 0 || f[s] >= n)
                throw IndexOutOfRangeError(path + ": face " + std::to_string(fi) +
                                           " references vertex " + std::to_string(f[s]) +
                                           " outside [0," + std::to_string(n) + ")");
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw ParseError(path, 0, "face " + std::to_string(fi) + " repeats a vertex index");
        Vec3 a = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        Vec3 b = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        if (a.cross(b).norm() <= 0.0)
            throw ParseError(path, 0, "face " + std::to_string(fi) + " has zero area");
    }
}

TriangleMesh load_off(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    long lineno = 0;
    std::string line;
    if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "empty file");
    std::istringstream hdr(line);
    std::string magic;
    hdr >> magic;
    long nv, nf, ne;
    if (magic == "OFF") {
        if (!(hdr >> nv >> nf >> ne)) {
            if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "missing counts");
            std::istringstream c(line);
            if (!(c >> nv >> nf >> ne)) throw ParseError(path, lineno, "bad count line");
        }
    } else {
        // headerless variant: counts on the first line
        std::istringstream c(line);
        if (!(c >> nv >> nf >> ne)) throw ParseError(path, lineno, "expected OFF header");
    }
    if (nv < 0 || nf < 0) throw ParseError(path, lineno, "negative counts");

    TriangleMesh mesh;
    mesh.name = fs::path(path).stem().string();
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "unexpected EOF in vertices");
        std::istringstream v(line);
        double x, y, z;
        if (!(v >> x >> y >> z)) throw ParseError(path, lineno, "bad vertex line");
        mesh.vertices.emplace_back(x, y, z);
    }
    mesh.faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "unexpected EOF in faces");
        std::istringstream f(line);
        int cnt, a, b, c;
        if (!(f >> cnt >> a >> b >> c)) throw ParseError(path, lineno, "bad face line");
        if (cnt != 3) throw ParseError(path, lineno, "only triangles supported");
        mesh.faces.push_back({a, b, c});
    }
    check_faces(mesh, path);
    return mesh;
}

TriangleMesh load_ply(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    long lineno = 0;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, ++lineno, "empty file");
    ++lineno;
    if (line.rfind("ply", 0) != 0) throw ParseError(path, lineno, "not a PLY file");

    long nv = -1, nf = -1;
    int vertex_props = 0;
    bool in_vertex_element = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream s(line);
        std::string tok;
        s >> tok;
        if (tok == "format") {
            std::string fmt;
            s >> fmt;
            if (fmt != "ascii") throw ParseError(path, lineno, "binary PLY not supported");
        } else if (tok == "element") {
            std::string what;
            long cnt;
            s >> what >> cnt;
            in_vertex_element = (what == "vertex");
            if (what == "vertex") nv = cnt;
            else if (what == "face") nf = cnt;
        } else if (tok == "property") {
            if (in_vertex_element) ++vertex_props;
        } else if (tok == "end_header") {
            break;
        }
    }
    if (nv < 0 || nf < 0) throw ParseError(path, lineno, "incomplete PLY header");

    TriangleMesh mesh;
    mesh.name = fs::path(path).stem().string();
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "unexpected EOF in vertices");
        std::istringstream v(line);
        double x, y, z;
        if (!(v >> x >> y >> z)) throw ParseError(path, lineno, "bad vertex line");
        mesh.vertices.emplace_back(x, y, z);
    }
    mesh.faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        if (!next_line(in, line, lineno)) throw ParseError(path, lineno, "unexpected EOF in faces");
        std::istringstream f(line);
        int cnt, a, b, c;
        if (!(f >> cnt >> a >> b >> c)) throw ParseError(path, lineno, "bad face line");
        if (cnt != 3) throw ParseError(path, lineno, "only triangles supported");
        mesh.faces.push_back({a, b, c});
    }
    check_faces(mesh, path);
    return mesh;
}

TriangleMesh load_tosca(const std::string &path) {
    fs::path p(path);
    fs::path vert = p, tri = p;
    if (lower_ext(path) == ".vert") {
        tri.replace_extension(".tri");
    } else if (lower_ext(path) == ".tri") {
        vert.replace_extension(".vert");
    } else {
        vert = p.string() + ".vert";
        tri = p.string() + ".tri";
    }
    std::ifstream vin(vert);
    if (!vin) throw FileNotFoundError(vert.string());
    std::ifstream tin(tri);
    if (!tin) throw FileNotFoundError(tri.string());

    TriangleMesh mesh;
    mesh.name = vert.stem().string();
    std::string line;
    long lineno = 0;
    while (next_line(vin, line, lineno)) {
        std::istringstream v(line);
        double x, y, z;
        if (!(v >> x >> y >> z)) throw ParseError(vert.string(), lineno, "bad vertex line");
        mesh.vertices.emplace_back(x, y, z);
    }
    lineno = 0;
    while (next_line(tin, line, lineno)) {
        std::istringstream f(line);
        long a, b, c;
        if (!(f >> a >> b >> c)) throw ParseError(tri.string(), lineno, "bad face line");
        // dataset convention: 1-based indices
        mesh.faces.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1), static_cast<int>(c - 1)});
    }
    check_faces(mesh, tri.string());
    return mesh;
}

MeshFormat sniff_format(const std::string &path) {
    std::string ext = lower_ext(path);
    if (ext == ".off") return MeshFormat::Off;
    if (ext == ".ply") return MeshFormat::PlyAscii;
    if (ext == ".vert" || ext == ".tri") return MeshFormat::ToscaVertTri;
    std::ifstream in(path);
    if (!in) {
        if (fs::exists(path + ".vert")) return MeshFormat::ToscaVertTri;
        throw FileNotFoundError(path);
    }
    std::string first;
    std::getline(in, first);
    if (first.rfind("ply", 0) == 0) return MeshFormat::PlyAscii;
    if (first.rfind("OFF", 0) == 0) return MeshFormat::Off;
    throw ParseError(path, 1, "cannot determine mesh format");
}

void append_double(std::string &out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

} // namespace

TriangleMesh load_mesh(const std::string &path, MeshFormat format) {
    if (format == MeshFormat::Auto) format = sniff_format(path);
    switch (format) {
        case MeshFormat::Off: return load_off(path);
        case MeshFormat::PlyAscii: return load_ply(path);
        case MeshFormat::ToscaVertTri: return load_tosca(path);
        default: throw Error(ErrorCode::Usage, "unknown format");
    }
}

void write_mesh(const TriangleMesh &mesh, const std::string &path, MeshFormat format) {
    if (format == MeshFormat::Auto) {
        std::string ext = lower_ext(path);
        format = (ext == ".ply") ? MeshFormat::PlyAscii : MeshFormat::Off;
    }
    std::string out;
    if (format == MeshFormat::Off) {
        out += "OFF\n";
        out += std::to_string(mesh.vertex_count()) + " " + std::to_string(mesh.face_count()) + " 0\n";
        for (const Vec3 &v : mesh.vertices) {
            append_double(out, v.x());
            out += ' ';
            append_double(out, v.y());
            out += ' ';
            append_double(out, v.z());
            out += '\n';
        }
    } else if (format == MeshFormat::PlyAscii) {
        out += "ply\nformat ascii 1.0\n";
        out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
        out += "property float x\nproperty float y\nproperty float z\n";
        out += "element face " + std::to_string(mesh.face_count()) + "\n";
        out += "property list uchar int vertex_indices\nend_header\n";
        for (const Vec3 &v : mesh.vertices) {
            append_double(out, v.x());
            out += ' ';
            append_double(out, v.y());
            out += ' ';
            append_double(out, v.z());
            out += '\n';
        }
    } else {
        throw Error(ErrorCode::Usage, "write_mesh: unsupported format");
    }
    for (const auto &f : mesh.faces)
        out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " +
               std::to_string(f[2]) + "\n";

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << out;
    if (!os) throw IoError("write failed: " + path);
}

std::array<int, 3> ramp_color(double t) {
    // Diverging ramp, three stops (see docs/formats.md):
    //   t=0.0 -> ( 59,  76, 192)
    //   t=0.5 -> (221, 221, 221)
    //   t=1.0 -> (180,   4,  38)
    static const double lo[3] = {59, 76, 192};
    static const double mid[3] = {221, 221, 221};
    static const double hi[3] = {180, 4, 38};
    t = std::clamp(t, 0.0, 1.0);
    std::array<int, 3> rgb{};
    for (int c = 0; c < 3; ++c) {
        double v = (t <= 0.5) ? lo[c] + (mid[c] - lo[c]) * (t / 0.5)
                              : mid[c] + (hi[c] - mid[c]) * ((t - 0.5) / 0.5);
        rgb[c] = static_cast<int>(std::lround(v));
    }
    return rgb;
}

void write_scalar_field(const TriangleMesh &mesh, const std::vector<double> &field,
                        const std::string &path) {
    if (field.size() != mesh.vertices.size())
        throw Error(ErrorCode::Usage, "write_scalar_field: field length != vertex count");
    for (double v : field)
        if (!std::isfinite(v)) throw NumericError("write_scalar_field: non-finite field value");

    double lo = *std::min_element(field.begin(), field.end());
    double hi = *std::max_element(field.begin(), field.end());
    const bool degenerate = (hi - lo) < 1e-12;

    std::string out;
    out += "ply\nformat ascii 1.0\n";
    out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
    out += "property float x\nproperty float y\nproperty float z\n";
    out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out += "element face " + std::to_string(mesh.face_count()) + "\n";
    out += "property list uchar int vertex_indices\nend_header\n";
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const Vec3 &v = mesh.vertices[i];
        double t = degenerate ? 0.5 : (field[i] - lo) / (hi - lo);
        auto rgb = ramp_color(t);
        append_double(out, v.x());
        out += ' ';
        append_double(out, v.y());
        out += ' ';
        append_double(out, v.z());
        out += ' ' + std::to_string(rgb[0]) + ' ' + std::to_string(rgb[1]) + ' ' +
               std::to_string(rgb[2]) + '\n';
    }
    for (const auto &f : mesh.faces)
        out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " +
               std::to_string(f[2]) + "\n";

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << out;
    if (!os) throw IoError("write failed: " + path);
}

} // namespace qgshape
