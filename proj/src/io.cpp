#include "avs/io.hpp"

#include <bit>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>

#include "avs/error.hpp"
#include "avs/text.hpp"

namespace avs {

// ---- XYZ --------------------------------------------------------------------------

PointBatch parse_xyz(std::string_view content) {
  std::vector<RawPoint> raw;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto tok = text::split_ws(line);
    if (tok.size() < 3) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no), line_no);
    RawPoint p;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      double v = 0.0;
      if (!text::parse_double(tok[i], v)) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad number '" +
                                               std::string(tok[i]) + "'", line_no);
      }
      if (i < 3) {
        p.xyz[static_cast<Eigen::Index>(i)] = v;
      } else {
        p.features.push_back(v);
      }
    }
    raw.push_back(std::move(p));
  }
  if (raw.empty()) throw Error(ErrorKind::EmptyFile, "no points");
  return validate_batch(raw);
}

PointBatch load_xyz(const std::filesystem::path& path) { return parse_xyz(text::read_file(path)); }

std::string format_xyz(const PointBatch& batch) {
  std::string out;
  out.reserve(batch.count() * 36);
  const Matrix& c = batch.coords();
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += text::format_double(c(r, 0), 9);
    out += ' ';
    out += text::format_double(c(r, 1), 9);
    out += ' ';
    out += text::format_double(c(r, 2), 9);
    if (batch.has_features()) {
      for (Eigen::Index f = 0; f < batch.features()->cols(); ++f) {
        out += ' ';
        out += text::format_double((*batch.features())(r, f), 9);
      }
    }
    out += '\n';
  }
  return out;
}

void write_xyz(const std::filesystem::path& path, const PointBatch& batch) { text::write_file(path, format_xyz(batch)); }

// ---- PLY --------------------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little, "PLY reader assumes a little-endian host");

enum class PlyType { Int8, Uint8, Int16, Uint16, Int32, Uint32, Float32, Float64 };

std::optional<PlyType> ply_type(std::string_view name) {
  if (name == "char" || name == "int8") return PlyType::Int8;
  if (name == "uchar" || name == "uint8") return PlyType::Uint8;
  if (name == "short" || name == "int16") return PlyType::Int16;
  if (name == "ushort" || name == "uint16") return PlyType::Uint16;
  if (name == "int" || name == "int32") return PlyType::Int32;
  if (name == "uint" || name == "uint32") return PlyType::Uint32;
  if (name == "float" || name == "float32") return PlyType::Float32;
  if (name == "double" || name == "float64") return PlyType::Float64;
  return std::nullopt;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::Int8:
    case PlyType::Uint8: return 1;
    case PlyType::Int16:
    case PlyType::Uint16: return 2;
    case PlyType::Int32:
    case PlyType::Uint32:
    case PlyType::Float32: return 4;
    case PlyType::Float64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double ply_read(PlyType t, const char* p) {
  switch (t) {
    case PlyType::Int8: return load_le<std::int8_t>(p);
    case PlyType::Uint8: return load_le<std::uint8_t>(p);
    case PlyType::Int16: return load_le<std::int16_t>(p);
    case PlyType::Uint16: return load_le<std::uint16_t>(p);
    case PlyType::Int32: return load_le<std::int32_t>(p);
    case PlyType::Uint32: return load_le<std::uint32_t>(p);
    case PlyType::Float32: return load_le<float>(p);
    case PlyType::Float64: return load_le<double>(p);
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::Uint8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

[[noreturn]] void ply_header_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "PLY header line " + std::to_string(line_no) + ": " + what, line_no);
}

}  // namespace

PointBatch parse_ply(std::string_view bytes) {
  std::vector<PlyElement> elements;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_format = false;
  bool header_done = false;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) break;
    const std::string_view line = text::trim(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "ply") ply_header_error(line_no, "missing 'ply' magic");
      continue;
    }
    const auto tok = text::split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") {
      header_done = true;
      break;
    }
    if (tok[0] == "format") {
      if (tok.size() != 3) ply_header_error(line_no, "bad format line");
      if (tok[1] != "binary_little_endian") {
        throw Error(ErrorKind::UnsupportedFormat, "PLY format '" + std::string(tok[1]) + "' is not supported");
      }
      if (tok[2] != "1.0") throw Error(ErrorKind::UnsupportedFormat, "PLY version must be 1.0");
      saw_format = true;
    } else if (tok[0] == "element") {
      double count = 0.0;
      if (tok.size() != 3 || !text::parse_double(tok[2], count) || count < 0) ply_header_error(line_no, "bad element");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(count), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) ply_header_error(line_no, "property before element");
      PlyProperty prop;
      if (tok.size() == 5 && tok[1] == "list") {
        auto ct = ply_type(tok[2]);
        auto vt = ply_type(tok[3]);
        if (!ct || !vt) ply_header_error(line_no, "unknown list type");
        prop = {std::string(tok[4]), *vt, true, *ct};
      } else if (tok.size() == 3) {
        auto t = ply_type(tok[1]);
        if (!t) ply_header_error(line_no, "unknown type '" + std::string(tok[1]) + "'");
        prop = {std::string(tok[2]), *t, false, PlyType::Uint8};
      } else {
        ply_header_error(line_no, "bad property line");
      }
      elements.back().properties.push_back(std::move(prop));
    } else {
      ply_header_error(line_no, "unexpected keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!header_done) throw Error(ErrorKind::ParseError, "PLY header is not terminated");
  if (!saw_format) throw Error(ErrorKind::ParseError, "PLY header has no format line");

  auto truncated = [] { throw Error(ErrorKind::ParseError, "PLY body is truncated"); };
  std::optional<PointBatch> result;
  for (const PlyElement& el : elements) {
    if (el.name != "vertex") {
      std::cerr << "warning: skipping PLY element '" << el.name << "'\n";
      if (result) break;  // nothing after the vertex block is needed
      for (std::size_t i = 0; i < el.count; ++i) {
        for (const PlyProperty& p : el.properties) {
          if (p.is_list) {
            if (pos + ply_size(p.count_type) > bytes.size()) truncated();
            const double n = ply_read(p.count_type, bytes.data() + pos);
            pos += ply_size(p.count_type) + static_cast<std::size_t>(n) * ply_size(p.type);
          } else {
            pos += ply_size(p.type);
          }
          if (pos > bytes.size()) truncated();
        }
      }
      continue;
    }
    if (result) throw Error(ErrorKind::UnsupportedFormat, "PLY has more than one vertex element");
    int axis[3] = {-1, -1, -1};
    std::vector<std::size_t> feature_props;
    std::vector<std::size_t> offsets;
    std::size_t stride = 0;
    for (std::size_t i = 0; i < el.properties.size(); ++i) {
      const PlyProperty& p = el.properties[i];
      if (p.is_list) throw Error(ErrorKind::UnsupportedFormat, "list property '" + p.name + "' on vertex");
      offsets.push_back(stride);
      stride += ply_size(p.type);
      if (p.name == "x") axis[0] = static_cast<int>(i);
      else if (p.name == "y") axis[1] = static_cast<int>(i);
      else if (p.name == "z") axis[2] = static_cast<int>(i);
      else feature_props.push_back(i);
    }
    if (axis[0] < 0 || axis[1] < 0 || axis[2] < 0) {
      throw Error(ErrorKind::UnsupportedFormat, "vertex element lacks x, y, z");
    }
    if (el.count == 0) throw Error(ErrorKind::EmptyFile, "PLY has no vertices");
    if (pos + el.count * stride > bytes.size()) truncated();
    Matrix coords(static_cast<Eigen::Index>(el.count), 3);
    Matrix features(static_cast<Eigen::Index>(el.count), static_cast<Eigen::Index>(feature_props.size()));
    for (std::size_t v = 0; v < el.count; ++v) {
      const char* row = bytes.data() + pos + v * stride;
      const auto r = static_cast<Eigen::Index>(v);
      for (int a = 0; a < 3; ++a) {
        const auto& p = el.properties[static_cast<std::size_t>(axis[a])];
        coords(r, a) = ply_read(p.type, row + offsets[static_cast<std::size_t>(axis[a])]);
      }
      for (std::size_t f = 0; f < feature_props.size(); ++f) {
        const auto& p = el.properties[feature_props[f]];
        features(r, static_cast<Eigen::Index>(f)) = ply_read(p.type, row + offsets[feature_props[f]]);
      }
    }
    pos += el.count * stride;
    std::optional<Matrix> feats;
    if (!feature_props.empty()) feats = std::move(features);
    result = PointBatch::single_frame(std::move(coords), std::move(feats));
  }
  if (!result) throw Error(ErrorKind::UnsupportedFormat, "PLY has no vertex element");
  return std::move(*result);
}

PointBatch load_ply(const std::filesystem::path& path) { return parse_ply(text::read_file(path)); }

std::string format_ply(const PointBatch& batch, const std::vector<std::string>& feature_names) {
  const std::size_t width = batch.feature_width();
  std::string out = "ply\nformat binary_little_endian 1.0\nelement vertex " + std::to_string(batch.count()) +
                    "\nproperty float x\nproperty float y\nproperty float z\n";
  for (std::size_t f = 0; f < width; ++f) {
    const std::string name = f < feature_names.size() ? feature_names[f] : "f" + std::to_string(f);
    out += "property float " + name + "\n";
  }
  out += "end_header\n";
  auto put = [&out](double v) {
    const float f = static_cast<float>(v);
    char buf[4];
    std::memcpy(buf, &f, 4);
    out.append(buf, 4);
  };
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (int a = 0; a < 3; ++a) put(batch.coords()(r, a));
    for (std::size_t f = 0; f < width; ++f) put((*batch.features())(r, static_cast<Eigen::Index>(f)));
  }
  return out;
}

void write_ply(const std::filesystem::path& path, const PointBatch& batch, const std::vector<std::string>& names) {
  text::write_file(path, format_ply(batch, names));
}

PointBatch load_point_file(const std::filesystem::path& path) {
  if (path.extension() == ".ply") return load_ply(path);
  return load_xyz(path);
}

}  // namespace avs
