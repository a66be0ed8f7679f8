#include "isoshock/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace isoshock {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

constexpr char kMagic[4] = {'I', 'S', 'O', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("field dump truncated");
  return v;
}

}  // namespace

void write_field_binary(const std::string& path, const ConservedField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid2D& g = field.grid();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
  for (double v : {g.xmin, g.xmax, g.ymin, g.ymax, field.time()}) put<double>(os, v);
  for (const Conserved& c : field.cells()) {
    const double rec[4] = {c.rho, c.mx, c.my, c.tracer};
    os.write(reinterpret_cast<const char*>(rec), sizeof rec);
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

ConservedField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error(path + ": not a field dump");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error(path + ": unsupported dump version");
  Grid2D g;
  g.nx = static_cast<int>(get<std::uint32_t>(is));
  g.ny = static_cast<int>(get<std::uint32_t>(is));
  g.xmin = get<double>(is);
  g.xmax = get<double>(is);
  g.ymin = get<double>(is);
  g.ymax = get<double>(is);
  const double t = get<double>(is);
  ConservedField field(g, t);
  for (Conserved& c : field.cells()) {
    double rec[4];
    is.read(reinterpret_cast<char*>(rec), sizeof rec);
    if (!is) throw std::runtime_error(path + ": field dump truncated");
    c = Conserved{rec[0], rec[1], rec[2], rec[3]};
  }
  return field;
}

void write_field_csv(const std::string& path, const ConservedField& field) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid2D& g = field.grid();
  os << std::setprecision(17);
  os << "# nx=" << g.nx << " ny=" << g.ny << " xmin=" << g.xmin << " xmax=" << g.xmax
     << " ymin=" << g.ymin << " ymax=" << g.ymax << " t=" << field.time() << "\n";
  os << "i,j,x,y,rho,rho_u,rho_v,rho_phi\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Conserved& c = field(i, j);
      os << i << ',' << j << ',' << g.xc(i) << ',' << g.yc(j) << ',' << c.rho << ',' << c.mx << ','
         << c.my << ',' << c.tracer << '\n';
    }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace isoshock
