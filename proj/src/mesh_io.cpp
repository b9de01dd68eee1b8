#include "cargen/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cargen/error.hpp"

namespace cargen {

static_assert(std::endian::native == std::endian::little, "binary mesh IO assumes a little-endian host");

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open mesh file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_double(std::string_view tok, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(tok) + "'");
  }
  return v;
}

long parse_long(std::string_view tok, const char* what) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

TriMesh make_mesh(std::vector<Vec3> v, std::vector<Face> f, const std::filesystem::path& path) {
  if (f.empty()) throw InputError("mesh has no faces: " + path.string());
  try {
    return TriMesh(std::move(v), std::move(f));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- OBJ

TriMesh read_obj(const std::string& text, const std::filesystem::path& path) {
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw InputError(path.string() + ":" + std::to_string(line_no) + ": vertex needs 3 coordinates");
      verts.emplace_back(parse_double(tok[1], "vertex coordinate"), parse_double(tok[2], "vertex coordinate"),
                         parse_double(tok[3], "vertex coordinate"));
    } else if (tok[0] == "f") {
      if (tok.size() != 4) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": only triangle faces are supported");
      }
      Face t{};
      for (int k = 0; k < 3; ++k) {
        std::string_view ref = tok[static_cast<std::size_t>(k) + 1];
        ref = ref.substr(0, ref.find('/'));
        long idx = parse_long(ref, "face index");
        if (idx < 0) idx = static_cast<long>(verts.size()) + idx + 1;  // relative reference
        if (idx < 1) throw InputError(path.string() + ":" + std::to_string(line_no) + ": face index out of range");
        t[static_cast<std::size_t>(k)] = static_cast<int>(idx - 1);
      }
      faces.push_back(t);
    }
  }
  return make_mesh(std::move(verts), std::move(faces), path);
}

// ---------------------------------------------------------------- PLY

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType ply_type(std::string_view name) {
  static const std::unordered_map<std::string_view, PlyType> kTypes = {
      {"char", PlyType::i8},    {"int8", PlyType::i8},     {"uchar", PlyType::u8},   {"uint8", PlyType::u8},
      {"short", PlyType::i16},  {"int16", PlyType::i16},   {"ushort", PlyType::u16}, {"uint16", PlyType::u16},
      {"int", PlyType::i32},    {"int32", PlyType::i32},   {"uint", PlyType::u32},   {"uint32", PlyType::u32},
      {"float", PlyType::f32},  {"float32", PlyType::f32}, {"double", PlyType::f64}, {"float64", PlyType::f64}};
  const auto it = kTypes.find(name);
  if (it == kTypes.end()) throw InputError("unknown PLY property type '" + std::string(name) + "'");
  return it->second;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8: return 1;
    case PlyType::i16:
    case PlyType::u16: return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32: return 4;
    case PlyType::f64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type{};
  bool is_list = false;
  PlyType count_type{};
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> props;
};

class PlyReader {
 public:
  PlyReader(const std::string& body, std::size_t start, bool binary)
      : body_(body), pos_(start), binary_(binary) {}

  double read(PlyType t) {
    if (!binary_) return parse_double(next_token(), "PLY value");
    const std::size_t n = ply_size(t);
    if (pos_ + n > body_.size()) throw InputError("PLY body truncated");
    const char* p = body_.data() + pos_;
    pos_ += n;
    switch (t) {
      case PlyType::i8: return static_cast<double>(static_cast<std::int8_t>(*p));
      case PlyType::u8: return static_cast<double>(static_cast<std::uint8_t>(*p));
      case PlyType::i16: return load<std::int16_t>(p);
      case PlyType::u16: return load<std::uint16_t>(p);
      case PlyType::i32: return load<std::int32_t>(p);
      case PlyType::u32: return load<std::uint32_t>(p);
      case PlyType::f32: return load<float>(p);
      case PlyType::f64: return load<double>(p);
    }
    return 0.0;
  }

 private:
  template <class T>
  static double load(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return static_cast<double>(v);
  }

  std::string_view next_token() {
    while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < body_.size() && !std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
    if (start == pos_) throw InputError("PLY body truncated");
    return {body_.data() + start, pos_ - start};
  }

  const std::string& body_;
  std::size_t pos_;
  bool binary_;
};

TriMesh read_ply(const std::string& text, const std::filesystem::path& path) {
  if (text.rfind("ply", 0) != 0) throw InputError(path.string() + ": missing PLY magic");
  const std::size_t header_end = text.find("end_header");
  if (header_end == std::string::npos) throw InputError(path.string() + ": PLY header not terminated");
  std::size_t body_start = text.find('\n', header_end);
  if (body_start == std::string::npos) throw InputError(path.string() + ": PLY header not terminated");
  ++body_start;

  std::istringstream header(text.substr(0, header_end));
  std::string line;
  std::vector<PlyElement> elements;
  bool binary = false;
  while (std::getline(header, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info" || tok[0] == "ply") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2) throw InputError(path.string() + ": bad PLY format line");
      if (tok[1] == "ascii") binary = false;
      else if (tok[1] == "binary_little_endian") binary = true;
      else throw InputError(path.string() + ": unsupported PLY encoding '" + std::string(tok[1]) + "'");
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw InputError(path.string() + ": bad PLY element line");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(parse_long(tok[2], "PLY element count")), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw InputError(path.string() + ": PLY property before element");
      PlyProperty prop;
      if (tok.size() == 5 && tok[1] == "list") {
        prop.is_list = true;
        prop.count_type = ply_type(tok[2]);
        prop.type = ply_type(tok[3]);
        prop.name = tok[4];
      } else if (tok.size() == 3) {
        prop.type = ply_type(tok[1]);
        prop.name = tok[2];
      } else {
        throw InputError(path.string() + ": bad PLY property line");
      }
      elements.back().props.push_back(prop);
    }
  }

  PlyReader reader(text, body_start, binary);
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  for (const PlyElement& el : elements) {
    if (el.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t p = 0; p < el.props.size(); ++p) {
        if (el.props[p].name == "x") ix = static_cast<int>(p);
        if (el.props[p].name == "y") iy = static_cast<int>(p);
        if (el.props[p].name == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) throw InputError(path.string() + ": PLY vertex lacks x/y/z");
      verts.reserve(el.count);
      std::vector<double> vals(el.props.size());
      for (std::size_t i = 0; i < el.count; ++i) {
        for (std::size_t p = 0; p < el.props.size(); ++p) {
          if (el.props[p].is_list) {
            const auto n = static_cast<std::size_t>(reader.read(el.props[p].count_type));
            for (std::size_t k = 0; k < n; ++k) reader.read(el.props[p].type);
          } else {
            vals[p] = reader.read(el.props[p].type);
          }
        }
        verts.emplace_back(vals[static_cast<std::size_t>(ix)], vals[static_cast<std::size_t>(iy)],
                           vals[static_cast<std::size_t>(iz)]);
      }
    } else {
      const bool is_face = el.name == "face";
      for (std::size_t i = 0; i < el.count; ++i) {
        for (const PlyProperty& prop : el.props) {
          if (!prop.is_list) {
            reader.read(prop.type);
            continue;
          }
          const auto n = static_cast<std::size_t>(reader.read(prop.count_type));
          const bool indices = is_face && (prop.name == "vertex_indices" || prop.name == "vertex_index");
          if (indices && n != 3) throw InputError(path.string() + ": only triangle faces are supported");
          Face t{};
          for (std::size_t k = 0; k < n; ++k) {
            const double v = reader.read(prop.type);
            if (indices) t[k] = static_cast<int>(v);
          }
          if (indices) faces.push_back(t);
        }
      }
    }
  }
  return make_mesh(std::move(verts), std::move(faces), path);
}

// ---------------------------------------------------------------- STL

TriMesh read_stl(const std::string& data, const std::filesystem::path& path) {
  std::vector<Vec3> soup;
  std::vector<Face> faces;
  bool binary = data.size() >= 84;
  std::uint32_t count = 0;
  if (binary) {
    std::memcpy(&count, data.data() + 80, 4);
    binary = data.size() == 84 + 50 * static_cast<std::size_t>(count);
  }
  if (binary) {
    soup.reserve(3 * count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const char* rec = data.data() + 84 + 50 * static_cast<std::size_t>(i);
      float xyz[9];
      std::memcpy(xyz, rec + 12, sizeof(xyz));
      for (int k = 0; k < 3; ++k) soup.emplace_back(xyz[3 * k], xyz[3 * k + 1], xyz[3 * k + 2]);
    }
  } else {
    if (lower(std::string_view(data).substr(0, 5)) != "solid") {
      throw InputError(path.string() + ": not a valid STL file");
    }
    std::istringstream in(data);
    std::string word;
    while (in >> word) {
      if (lower(word) == "vertex") {
        double x, y, z;
        if (!(in >> x >> y >> z)) throw InputError(path.string() + ": malformed STL vertex");
        soup.emplace_back(x, y, z);
      }
    }
    if (soup.size() % 3 != 0) throw InputError(path.string() + ": STL facet with other than 3 vertices");
  }
  for (std::size_t i = 0; i < soup.size(); i += 3) {
    faces.push_back({static_cast<int>(i), static_cast<int>(i + 1), static_cast<int>(i + 2)});
  }
  if (faces.empty()) throw InputError("mesh has no faces: " + path.string());
  try {
    return weld_vertices(soup, faces, kStlWeldTolerance);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- writers

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_obj(const TriMesh& mesh, std::ofstream& out) {
  out << "# cargen\n";
  for (const Vec3& p : mesh.vertices()) {
    out << "v " << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' ' << fmt_double(p.z()) << '\n';
  }
  for (const Face& t : mesh.faces()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_ply(const TriMesh& mesh, std::ofstream& out, const SaveOptions& opt) {
  const bool scalar = opt.vertex_scalar != nullptr && !opt.vertex_scalar->empty();
  if (scalar && opt.vertex_scalar->size() != mesh.num_vertices()) {
    throw InputError("PLY vertex scalar length does not match vertex count");
  }
  out << "ply\nformat " << (opt.ply_binary ? "binary_little_endian" : "ascii") << " 1.0\n"
      << "comment cargen\n"
      << "element vertex " << mesh.num_vertices() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (scalar) out << "property double " << opt.scalar_name << "\n";
  out << "element face " << mesh.num_faces() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3& p = mesh.vertex(static_cast<int>(v));
    double rec[4] = {p.x(), p.y(), p.z(), scalar ? (*opt.vertex_scalar)[v] : 0.0};
    const int n = scalar ? 4 : 3;
    if (opt.ply_binary) {
      out.write(reinterpret_cast<const char*>(rec), static_cast<std::streamsize>(n * sizeof(double)));
    } else {
      for (int k = 0; k < n; ++k) out << (k ? " " : "") << fmt_double(rec[k]);
      out << '\n';
    }
  }
  for (const Face& t : mesh.faces()) {
    if (opt.ply_binary) {
      const std::uint8_t n = 3;
      const std::int32_t idx[3] = {t[0], t[1], t[2]};
      out.write(reinterpret_cast<const char*>(&n), 1);
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    } else {
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
  }
}

void write_stl(const TriMesh& mesh, std::ofstream& out) {
  char header[80] = {};
  std::memcpy(header, "cargen binary STL", 17);
  out.write(header, 80);
  const auto count = static_cast<std::uint32_t>(mesh.num_faces());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Vec3 n = mesh.face_normal(static_cast<int>(f));
    float rec[12] = {static_cast<float>(n.x()), static_cast<float>(n.y()), static_cast<float>(n.z())};
    const Face& t = mesh.face(static_cast<int>(f));
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertex(t[static_cast<std::size_t>(k)]);
      rec[3 + 3 * k] = static_cast<float>(p.x());
      rec[4 + 3 * k] = static_cast<float>(p.y());
      rec[5 + 3 * k] = static_cast<float>(p.z());
    }
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    return static_cast<std::size_t>(static_cast<unsigned long long>(k.x) * 73856093ULL ^
                                    static_cast<unsigned long long>(k.y) * 19349663ULL ^
                                    static_cast<unsigned long long>(k.z) * 83492791ULL);
  }
};

}  // namespace

std::optional<MeshFormat> parse_mesh_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "obj") return MeshFormat::obj;
  if (n == "ply") return MeshFormat::ply;
  if (n == "stl") return MeshFormat::stl;
  return std::nullopt;
}

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
  return parse_mesh_format(ext);
}

TriMesh load_mesh(const std::filesystem::path& path, std::optional<MeshFormat> format) {
  if (!format) format = format_from_extension(path);
  if (!format) throw InputError("cannot infer mesh format from extension: " + path.string());
  const std::string data = read_file(path);
  switch (*format) {
    case MeshFormat::obj: return read_obj(data, path);
    case MeshFormat::ply: return read_ply(data, path);
    case MeshFormat::stl: return read_stl(data, path);
  }
  throw InputError("unsupported mesh format");
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, std::optional<MeshFormat> format,
               const SaveOptions& options) {
  if (!format) format = format_from_extension(path);
  if (!format) throw InputError("cannot infer mesh format from extension: " + path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write mesh file: " + path.string());
  switch (*format) {
    case MeshFormat::obj: write_obj(mesh, out); break;
    case MeshFormat::ply: write_ply(mesh, out, options); break;
    case MeshFormat::stl: write_stl(mesh, out); break;
  }
  out.flush();
  if (!out) throw InputError("failed while writing mesh file: " + path.string());
}

TriMesh weld_vertices(const std::vector<Vec3>& vertices, const std::vector<Face>& faces, double tolerance) {
  const double cell = std::max(tolerance, 1e-15);
  const double tol2 = tolerance * tolerance;
  std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec3& p = vertices[i];
    const CellKey c{static_cast<long long>(std::floor(p.x() / cell)), static_cast<long long>(std::floor(p.y() / cell)),
                    static_cast<long long>(std::floor(p.z() / cell))};
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
        for (long long dz = -1; dz <= 1 && found < 0; ++dz) {
          const auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if ((out[static_cast<std::size_t>(j)] - p).squaredNorm() <= tol2) {
              found = j;
              break;
            }
          }
        }
      }
    }
    if (found < 0) {
      found = static_cast<int>(out.size());
      out.push_back(p);
      grid[c].push_back(found);
    }
    remap[i] = found;
  }
  std::vector<Face> welded;
  welded.reserve(faces.size());
  for (const Face& t : faces) {
    const Face g{remap[static_cast<std::size_t>(t[0])], remap[static_cast<std::size_t>(t[1])],
                 remap[static_cast<std::size_t>(t[2])]};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
    welded.push_back(g);
  }
  return TriMesh(std::move(out), std::move(welded));
}

}  // namespace cargen
