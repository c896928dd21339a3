#pragma once

// Oriented triangle meshes and the ASCII OBJ subset used to load them.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nfrad {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

class MeshError : public std::runtime_error {
 public:
  MeshError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Triangle mesh with per-face outward normals (right-hand rule on the
/// winding) and areas. Every face has area above kMinTriangleArea.
class TriMesh {
 public:
  static constexpr double kMinTriangleArea = 1e-18;  // m^2

  TriMesh() = default;
  TriMesh(std::vector<Vec3> vertices, std::vector<std::array<std::size_t, 3>> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    normals_.reserve(triangles_.size());
    areas_.reserve(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      for (std::size_t idx : triangles_[t])
        if (idx >= vertices_.size()) throw MeshError("triangle " + std::to_string(t) + " has an out-of-range vertex index");
      const auto [a, b, c] = corners(t);
      const Vec3 n = cross(b - a, c - a);
      const double twice_area = norm(n);
      if (!(0.5 * twice_area > kMinTriangleArea)) throw MeshError("triangle " + std::to_string(t) + " is degenerate");
      normals_.push_back(n * (1.0 / twice_area));
      areas_.push_back(0.5 * twice_area);
      total_area_ += 0.5 * twice_area;
    }
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  const std::vector<double>& areas() const { return areas_; }
  std::size_t size() const { return triangles_.size(); }
  double total_area() const { return total_area_; }

  std::array<Vec3, 3> corners(std::size_t t) const {
    const auto& tri = triangles_[t];
    return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
  }

  /// Same surface with every face's winding reversed.
  TriMesh flipped() const {
    auto tris = triangles_;
    for (auto& t : tris) std::swap(t[1], t[2]);
    return TriMesh(vertices_, std::move(tris));
  }

  /// Rigidly scaled copy (all coordinates multiplied by `factor`).
  TriMesh scaled(double factor) const {
    auto v = vertices_;
    for (auto& p : v) p *= factor;
    return TriMesh(std::move(v), triangles_);
  }

  /// Lines in the source file that were neither "v" nor "f" (nor blank/comment).
  std::size_t ignored_lines = 0;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  double total_area_ = 0.0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.size() > 1 && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses "v x y z" and "f i j k" (1-based; "i/vt/vn" forms use the leading
/// index). Other records are counted in ignored_lines.
inline TriMesh parse_obj(std::string_view text) {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 3>> faces;
  std::vector<std::size_t> face_lines;
  std::size_t ignored = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0] == "v") {
      Vec3 v;
      if (tok.size() != 4 || !detail::parse_double(tok[1], v.x) || !detail::parse_double(tok[2], v.y) ||
          !detail::parse_double(tok[3], v.z))
        throw MeshError("malformed vertex record", line_no);
      vertices.push_back(v);
    } else if (tok[0] == "f") {
      if (tok.size() != 4) throw MeshError("face records must have exactly three vertices", line_no);
      std::array<std::size_t, 3> f{};
      for (std::size_t k = 0; k < 3; ++k) {
        std::string_view s = tok[k + 1];
        s = s.substr(0, s.find('/'));
        long long idx = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), idx);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw MeshError("malformed face index", line_no);
        if (idx < 1) throw MeshError("face index out of range", line_no);
        f[k] = static_cast<std::size_t>(idx - 1);
      }
      faces.push_back(f);
      face_lines.push_back(line_no);
    } else {
      ++ignored;
    }
    if (end == text.size()) break;
  }
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (std::size_t idx : faces[i])
      if (idx >= vertices.size()) throw MeshError("face index out of range", face_lines[i]);
    const Vec3& a = vertices[faces[i][0]];
    const double area = 0.5 * norm(cross(vertices[faces[i][1]] - a, vertices[faces[i][2]] - a));
    if (!(area > TriMesh::kMinTriangleArea)) throw MeshError("degenerate triangle", face_lines[i]);
  }
  TriMesh mesh(std::move(vertices), std::move(faces));
  mesh.ignored_lines = ignored;
  return mesh;
}

inline TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_obj(ss.str());
}

/// OBJ text for a mesh (17 significant digits).
inline std::string to_obj(const TriMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

}  // namespace nfrad
