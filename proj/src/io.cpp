#include "vpi/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>

#include "vpi/errors.hpp"

namespace vpi {

static_assert(std::endian::native == std::endian::little, "binary grid I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("truncated grid file");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

Axis unfold_axis(const Axis& ax) {
  if (!ax.mirrored) return ax;
  Axis full;
  for (std::size_t i = ax.edges.size(); i-- > 1;) full.edges.push_back(-ax.edges[i]);
  full.edges.insert(full.edges.end(), ax.edges.begin(), ax.edges.end());
  return full;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

GridField unfold(const GridField& field) {
  const Mesh& mesh = field.mesh();
  if (mesh.multiplicity() == 1.0) return field;
  std::array<Axis, 3> axes;
  for (int a = 0; a < 3; ++a) axes[a] = unfold_axis(mesh.axis(a));
  auto full = Mesh::tensor(axes, mesh.domain());
  GridField out(full, 0.0);
  const auto fd = full->dims();
  std::array<std::vector<std::size_t>, 3> source;
  for (int a = 0; a < 3; ++a) {
    const std::size_t m = mesh.axis(a).cells();
    for (std::size_t i = 0; i < fd[a]; ++i) {
      source[a].push_back(!mesh.axis(a).mirrored ? i : (i < m ? m - 1 - i : i - m));
    }
  }
  for (std::size_t i = 0; i < fd[0]; ++i) {
    for (std::size_t j = 0; j < fd[1]; ++j) {
      for (std::size_t k = 0; k < fd[2]; ++k) {
        out[full->index(i, j, k)] = field[mesh.index(source[0][i], source[1][j], source[2][k])];
      }
    }
  }
  return out;
}

void write_grid_binary(const GridField& field, const std::filesystem::path& path) {
  const GridField full = unfold(field);
  const Mesh& mesh = full.mesh();
  auto out = open_out(path, true);
  put<std::int64_t>(out, 3);
  for (auto d : mesh.dims()) put<std::int64_t>(out, static_cast<std::int64_t>(d));
  for (int a = 0; a < 3; ++a) put<double>(out, mesh.axis(a).edges.front());
  const bool uniform = mesh.is_uniform();
  put<double>(out, uniform ? mesh.axis(0).width(0) : 0.0);
  if (!uniform) {
    for (int a = 0; a < 3; ++a) {
      for (double e : mesh.axis(a).edges) put<double>(out, e);
    }
  }
  out.write(reinterpret_cast<const char*>(full.values().data()),
            static_cast<std::streamsize>(full.size() * sizeof(double)));
  if (!out) throw InputError("failed writing " + path.string());
}

GridField read_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const auto n = get<std::int64_t>(in);
  if (n != 3) throw InputError("grid file dimension must be 3, got " + std::to_string(n));
  std::array<std::int64_t, 3> dims{};
  for (auto& d : dims) {
    d = get<std::int64_t>(in);
    if (d < 3 || d > (1 << 20)) throw InputError("grid file has invalid dimensions");
  }
  Vec3 origin{};
  for (auto& o : origin) o = get<double>(in);
  const double spacing = get<double>(in);
  if (spacing < 0.0) throw InputError("grid file has negative spacing");
  std::array<Axis, 3> axes;
  for (int a = 0; a < 3; ++a) {
    for (std::int64_t i = 0; i <= dims[a]; ++i) {
      axes[a].edges.push_back(spacing > 0.0 ? origin[a] + spacing * static_cast<double>(i) : 0.0);
    }
  }
  if (spacing == 0.0) {
    for (int a = 0; a < 3; ++a) {
      for (auto& e : axes[a].edges) e = get<double>(in);
    }
  }
  auto mesh = Mesh::tensor(std::move(axes));
  std::vector<double> values(mesh->size());
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw InputError("truncated grid file");
  return GridField(mesh, std::move(values));
}

void write_grid_csv(const GridField& field, const std::filesystem::path& path, std::size_t max_cells) {
  const GridField full = unfold(field);
  const Mesh& mesh = full.mesh();
  if (full.size() > max_cells) {
    throw InputError("grid has " + std::to_string(full.size()) + " cells; CSV export is limited to " +
                     std::to_string(max_cells));
  }
  auto out = open_out(path, false);
  out << csv_row({"x", "y", "z", "value", "tag"});
  for (std::size_t idx = 0; idx < full.size(); ++idx) {
    const Vec3 c = mesh.center(idx);
    out << csv_row({format_double(c[0]), format_double(c[1]), format_double(c[2]),
                    format_double(full[idx]),
                    mesh.tag(idx) == CellTag::interior ? "interior" : "exterior"});
  }
}

void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << csv_row({"r", "value"});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << csv_row({format_double(profile.radii()[i]), format_double(profile.values()[i])});
  }
}

void write_level_map_csv(const RearrangementResult& result, const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << csv_row({"K", "volume"});
  for (const auto& lv : result.level_map) {
    out << csv_row({format_double(lv.level), format_double(lv.volume)});
  }
}

}  // namespace vpi
