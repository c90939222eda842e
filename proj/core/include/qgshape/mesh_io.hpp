#pragma once

#include <string>
#include <vector>

#include "qgshape/mesh.hpp"

namespace qgshape {

enum class MeshFormat { Off, PlyAscii, ToscaVertTri, Auto };

/// Loads a mesh from disk. For ToscaVertTri, `path` names the `.vert` file
/// (or its stem); the sibling `.tri` file holds 1-based face indices and is
/// converted to 0-based on load. Auto picks the format from the extension,
/// falling back to content sniffing.
TriangleMesh load_mesh(const std::string &path, MeshFormat format = MeshFormat::Auto);

void write_mesh(const TriangleMesh &mesh, const std::string &path,
                MeshFormat format = MeshFormat::Auto);

/// Per-vertex scalar field rendered as vertex colors into an ascii PLY.
/// The field is min-max normalized into the ramp documented in
/// docs/formats.md; a degenerate range (max-min < 1e-12) maps every vertex
/// to the ramp midpoint. Output bytes are deterministic.
void write_scalar_field(const TriangleMesh &mesh, const std::vector<double> &field,
                        const std::string &path);

/// Color ramp sample at t in [0,1]; returns 8-bit RGB.
std::array<int, 3> ramp_color(double t);

} // namespace qgshape
