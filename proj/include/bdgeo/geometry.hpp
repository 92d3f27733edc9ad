#pragma once

#include <array>
#include <optional>
#include <string>

#include "bdgeo/bd.hpp"
#include "bdgeo/format.hpp"
#include "bdgeo/measures.hpp"

/// Plot-ready geometry of the BD state space: the positivity tetrahedron,
/// the separability octahedron with its eight face planes, and optionally a
/// state point with its optimal separable pair (the t - t' - t'' segment).
namespace bdgeo::cli {

/// One octahedron face, the plane normal . x = offset.
struct FacePlane {
  std::array<double, 3> normal;
  double offset;
};

struct GeometryBundle {
  std::array<std::array<double, 3>, 4> tetra_vertices;
  std::array<std::array<double, 3>, 6> octa_vertices;
  std::array<FacePlane, 8> face_planes;
  std::optional<std::array<double, 3>> state_point;
  std::optional<std::array<double, 3>> t_prime;
  std::optional<std::array<double, 3>> t_double_prime;
};

inline GeometryBundle make_geometry_bundle(
    const std::optional<bd::BDState>& state) {
  GeometryBundle bundle;
  bundle.tetra_vertices = bd::kTetraVertices;
  bundle.octa_vertices = {{{{1, 0, 0}},
                           {{-1, 0, 0}},
                           {{0, 1, 0}},
                           {{0, -1, 0}},
                           {{0, 0, 1}},
                           {{0, 0, -1}}}};
  for (int m = 0; m < 8; ++m) {
    FacePlane& face = bundle.face_planes[static_cast<std::size_t>(m)];
    for (int axis = 0; axis < 3; ++axis)
      face.normal[static_cast<std::size_t>(axis)] =
          (m >> (2 - axis)) & 1 ? -1.0 : 1.0;
    face.offset = 1.0;
  }
  if (state.has_value()) {
    const measures::RobustnessCertificate cert = measures::robustness(*state);
    bundle.state_point = state->t().values();
    bundle.t_prime = cert.t_prime.values();
    bundle.t_double_prime = cert.t_double_prime.values();
  }
  return bundle;
}

/// CSV with fixed header `label,x,y,z`; face planes are emitted as their
/// unit-offset normals (normal . x = 1).
inline std::string geometry_csv(const GeometryBundle& bundle) {
  std::string out = "label,x,y,z\n";
  const auto row = [&out](const std::string& label,
                          const std::array<double, 3>& v) {
    out += label + "," + format_double(v[0]) + "," + format_double(v[1]) +
           "," + format_double(v[2]) + "\n";
  };
  for (std::size_t k = 0; k < 4; ++k)
    row("tetra_vertex_" + std::to_string(k + 1), bundle.tetra_vertices[k]);
  for (std::size_t k = 0; k < 6; ++k)
    row("octa_vertex_" + std::to_string(k + 1), bundle.octa_vertices[k]);
  for (std::size_t k = 0; k < 8; ++k)
    row("face_normal_" + std::to_string(k + 1), bundle.face_planes[k].normal);
  if (bundle.state_point.has_value()) {
    row("state", *bundle.state_point);
    row("t_prime", *bundle.t_prime);
    row("t_double_prime", *bundle.t_double_prime);
  }
  return out;
}

inline std::string geometry_json(const GeometryBundle& bundle) {
  const auto points = [](const auto& list) {
    std::string out = "[";
    bool first = true;
    for (const std::array<double, 3>& v : list) {
      if (!first) out += ",";
      first = false;
      out += format_array(v);
    }
    return out + "]";
  };

  std::string out = "{";
  out += "\"tetra_vertices\":" + points(bundle.tetra_vertices);
  out += ",\"octa_vertices\":" + points(bundle.octa_vertices);
  out += ",\"face_planes\":[";
  for (std::size_t k = 0; k < 8; ++k) {
    if (k != 0) out += ",";
    out += "{\"normal\":" + format_array(bundle.face_planes[k].normal) +
           ",\"offset\":" + format_double(bundle.face_planes[k].offset) + "}";
  }
  out += "]";
  if (bundle.state_point.has_value()) {
    out += ",\"state\":{\"t\":" + format_array(*bundle.state_point) +
           ",\"t_prime\":" + format_array(*bundle.t_prime) +
           ",\"t_double_prime\":" + format_array(*bundle.t_double_prime) + "}";
  } else {
    out += ",\"state\":null";
  }
  out += "}\n";
  return out;
}

}  // namespace bdgeo::cli
