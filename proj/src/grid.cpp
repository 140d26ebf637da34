#include "sgw/grid.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include "sgw/closedform.hpp"
#include "sgw/errors.hpp"
#include "sgw/io.hpp"
#include "sgw/marginals.hpp"
#include "sgw/parallel.hpp"
#include "sgw/simd/kernels.hpp"

namespace sgw {

static_assert(std::endian::native == std::endian::little, "grid-bin codec assumes a little-endian host");

void PhaseSpaceGrid::validate() const {
  if (n_z < 8 || n_p < 8) throw InvalidParameter("grid needs at least 8 nodes per axis");
  const bool finite = std::isfinite(z_min) && std::isfinite(z_max) && std::isfinite(p_min) && std::isfinite(p_max);
  if (!finite || !(z_min < z_max) || !(p_min < p_max))
    throw InvalidParameter("grid bounds must be finite and strictly ordered");
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::trace: return "trace";
    case FieldKind::diag_plus: return "diag+";
    case FieldKind::diag_minus: return "diag-";
    case FieldKind::offdiag_re: return "offdiag-re";
    case FieldKind::offdiag_im: return "offdiag-im";
    case FieldKind::offdiag_abs: return "offdiag-abs";
  }
  return "?";
}

FieldKind parse_field_kind(std::string_view s) {
  for (FieldKind k : {FieldKind::trace, FieldKind::diag_plus, FieldKind::diag_minus, FieldKind::offdiag_re,
                      FieldKind::offdiag_im, FieldKind::offdiag_abs})
    if (to_string(k) == s) return k;
  throw InvalidParameter("unknown field kind '" + std::string(s) + "'");
}

double WignerField::mass() const noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dz() * grid.dp();
}

double WignerField::max() const noexcept {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

namespace {

// Adds weight * G(z_i, p) along one row of constant z, through the vector exp.
void gaussian_row(const simd::Kernels& k, double* out, const PhaseSpaceGrid& g, double z, const GaussianForm& q,
                  double log_weight, bool accumulate) {
  const double dz = z - q.z0;
  k.exp_quadratic_row(out, g.n_p, g.p_min - q.p0, g.dp(), q.log_norm + log_weight - q.qzz * dz * dz, -q.qzp * dz,
                      -q.qpp, accumulate);
}

double log_weight(std::complex<double> amp) {
  const double w = std::norm(amp);
  return w > 0.0 ? std::log(w) : -HUGE_VAL;
}

}  // namespace

WignerField sample(FieldKind kind, double t, const PhaseSpaceGrid& grid, const Model& model) {
  grid.validate();
  WignerField field{grid, kind, std::vector<double>(grid.size()), t};
  const MatrixForm form = matrix_form(model, t);
  const simd::Kernels& k = simd::kernels();
  const double la = log_weight(form.a);
  const double lb = log_weight(form.b);

  parallel_for(grid.n_z, [&](std::size_t i) {
    double* row = field.values.data() + i * grid.n_p;
    const double z = grid.z(i);
    switch (kind) {
      case FieldKind::trace:
        gaussian_row(k, row, grid, z, form.plus.gauss, la, false);
        gaussian_row(k, row, grid, z, form.minus.gauss, lb, true);
        break;
      case FieldKind::diag_plus: gaussian_row(k, row, grid, z, form.plus.gauss, la, false); break;
      case FieldKind::diag_minus: gaussian_row(k, row, grid, z, form.minus.gauss, lb, false); break;
      case FieldKind::offdiag_abs: gaussian_row(k, row, grid, z, form.off.modulus, 0.0, false); break;
      case FieldKind::offdiag_re:
      case FieldKind::offdiag_im: {
        gaussian_row(k, row, grid, z, form.off.modulus, 0.0, false);
        for (std::size_t j = 0; j < grid.n_p; ++j) {
          const double ph = form.off.phase(z, grid.p(j));
          row[j] *= kind == FieldKind::offdiag_re ? std::cos(ph) : std::sin(ph);
        }
        break;
      }
    }
  });
  for (double v : field.values)
    if (!std::isfinite(v)) throw NonFiniteField("sampled field has a non-finite node");
  return field;
}

PhaseSpaceGrid auto_window(double t, const Model& model, double n_sigmas, std::uint32_t n_z, std::uint32_t n_p) {
  if (!(n_sigmas >= 3.0)) throw InvalidParameter("auto_window needs n_sigmas >= 3");
  const GaussianMoments g = moments(model, t);
  const double hz = std::abs(g.z_c) + n_sigmas * g.sigma_z;
  const double hp = std::abs(g.p_c) + n_sigmas * g.sigma_p;
  PhaseSpaceGrid grid{-hz, hz, -hp, hp, n_z, n_p};
  grid.validate();
  return grid;
}

namespace {

// One Newton step for the stationary point of the 3x3 neighbourhood, on the
// log of the values when they are positive (exact for a Gaussian peak, sheared
// or not). Falls back to independent parabolas when the local Hessian is not
// negative definite, and keeps the result inside the cell.
void refine(const WignerField& f, std::size_t i, std::size_t j, double& oz, double& op) {
  double v[3][3];
  bool positive = true;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      v[a][b] = f.at(i + a - 1, j + b - 1);
      positive = positive && v[a][b] > 0.0;
    }
  if (positive)
    for (auto& row : v)
      for (double& x : row) x = std::log(x);
  const double gz = 0.5 * (v[2][1] - v[0][1]);
  const double gp = 0.5 * (v[1][2] - v[1][0]);
  const double hzz = v[2][1] - 2.0 * v[1][1] + v[0][1];
  const double hpp = v[1][2] - 2.0 * v[1][1] + v[1][0];
  const double hzp = 0.25 * (v[2][2] - v[2][0] - v[0][2] + v[0][0]);
  const double det = hzz * hpp - hzp * hzp;
  if (hzz < 0.0 && det > 0.0) {
    oz = -(hpp * gz - hzp * gp) / det;
    op = -(hzz * gp - hzp * gz) / det;
  } else {
    oz = hzz < 0.0 ? -gz / hzz : 0.0;
    op = hpp < 0.0 ? -gp / hpp : 0.0;
  }
  oz = std::clamp(oz, -1.0, 1.0);
  op = std::clamp(op, -1.0, 1.0);
}

}  // namespace

std::vector<FieldPeak> find_local_maxima(const WignerField& field, double rel_threshold) {
  const auto& g = field.grid;
  const double floor = rel_threshold * field.max();
  std::vector<FieldPeak> peaks;
  for (std::size_t i = 1; i + 1 < g.n_z; ++i) {
    for (std::size_t j = 1; j + 1 < g.n_p; ++j) {
      const double v = field.at(i, j);
      if (v < floor || v <= 0.0) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double w = field.at(i + di, j + dj);
          // ties resolved toward the lower index so a plateau yields one peak
          if (w > v || (w == v && (di < 0 || (di == 0 && dj < 0)))) {
            is_max = false;
            break;
          }
        }
      if (!is_max) continue;
      double oz = 0.0, op = 0.0;
      refine(field, i, j, oz, op);
      peaks.push_back({g.z(i) + oz * g.dz(), g.p(j) + op * g.dp(), v, i, j});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const FieldPeak& a, const FieldPeak& b) { return a.z < b.z; });
  return peaks;
}

GridFormat parse_grid_format(std::string_view s) {
  if (s == "csv") return GridFormat::csv;
  if (s == "grid-bin" || s == "bin") return GridFormat::grid_bin;
  throw InvalidParameter("unknown grid format '" + std::string(s) + "'");
}

std::string encode_csv(const WignerField& field) {
  using io::format_double;
  const auto& g = field.grid;
  std::string out = "# kind,t,n_z,n_p,z_min,z_max,p_min,p_max\n# ";
  out += std::string(to_string(field.kind)) + ',' + format_double(field.t) + ',' + std::to_string(g.n_z) + ',' +
         std::to_string(g.n_p) + ',' + format_double(g.z_min) + ',' + format_double(g.z_max) + ',' +
         format_double(g.p_min) + ',' + format_double(g.p_max) + "\nz,p,value\n";
  out.reserve(out.size() + field.values.size() * 72);
  for (std::size_t i = 0; i < g.n_z; ++i) {
    const std::string z = format_double(g.z(i)) + ',';
    for (std::size_t j = 0; j < g.n_p; ++j) {
      out += z;
      out += format_double(g.p(j));
      out += ',';
      out += format_double(field.at(i, j));
      out += '\n';
    }
  }
  return out;
}

namespace {

template <class T>
void put(std::vector<unsigned char>& buf, std::size_t off, T v) {
  std::memcpy(buf.data() + off, &v, sizeof v);
}

template <class T>
T get(const std::vector<unsigned char>& buf, std::size_t off) {
  T v;
  std::memcpy(&v, buf.data() + off, sizeof v);
  return v;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_view(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<unsigned char> encode_grid_bin(const WignerField& field) {
  const auto& g = field.grid;
  std::vector<unsigned char> buf(kGridBinHeader + field.values.size() * 8, 0);
  std::memcpy(buf.data(), "WSG1", 4);
  put(buf, 8, g.z_min);
  put(buf, 16, g.z_max);
  put(buf, 24, g.p_min);
  put(buf, 32, g.p_max);
  put(buf, 40, g.n_z);
  put(buf, 44, g.n_p);
  if (!field.values.empty()) std::memcpy(buf.data() + kGridBinHeader, field.values.data(), field.values.size() * 8);
  return buf;
}

WignerField decode_grid_bin(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kGridBinHeader || std::memcmp(bytes.data(), "WSG1", 4) != 0)
    throw FormatError("not a grid-bin file");
  WignerField f;
  f.grid = {get<double>(bytes, 8),         get<double>(bytes, 16),        get<double>(bytes, 24),
            get<double>(bytes, 32),        get<std::uint32_t>(bytes, 40), get<std::uint32_t>(bytes, 44)};
  const std::size_t n = f.grid.size();
  if (bytes.size() != kGridBinHeader + n * 8)
    throw FormatError("grid-bin payload holds " + std::to_string((bytes.size() - kGridBinHeader) / 8) +
                      " values, header says " + std::to_string(n));
  f.values.resize(n);
  if (n) std::memcpy(f.values.data(), bytes.data() + kGridBinHeader, n * 8);
  return f;
}

WignerField decode_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  if (lines.size() < 3 || lines[1].substr(0, 2) != "# ") throw FormatError("csv field header missing");
  const auto meta = split_view(lines[1].substr(2));
  if (meta.size() != 8) throw FormatError("csv field header needs 8 values");
  WignerField f;
  f.kind = parse_field_kind(meta[0]);
  f.t = parse_number(meta[1]);
  f.grid.n_z = static_cast<std::uint32_t>(parse_number(meta[2]));
  f.grid.n_p = static_cast<std::uint32_t>(parse_number(meta[3]));
  f.grid.z_min = parse_number(meta[4]);
  f.grid.z_max = parse_number(meta[5]);
  f.grid.p_min = parse_number(meta[6]);
  f.grid.p_max = parse_number(meta[7]);
  if (lines.size() - 3 != f.grid.size()) throw FormatError("csv row count does not match the header");
  f.values.reserve(f.grid.size());
  for (std::size_t r = 3; r < lines.size(); ++r) {
    const auto cells = split_view(lines[r]);
    if (cells.size() != 3) throw FormatError("csv row needs z,p,value");
    f.values.push_back(parse_number(cells[2]));
  }
  return f;
}

void export_field(const WignerField& field, const std::filesystem::path& path, GridFormat format) {
  if (field.values.size() != field.grid.size()) throw InvalidParameter("field size does not match its grid");
  if (format == GridFormat::csv) {
    io::atomic_write(path, encode_csv(field));
  } else {
    const auto bytes = encode_grid_bin(field);
    io::atomic_write(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
}

WignerField import_field(const std::filesystem::path& path, GridFormat format) {
  const std::string text = io::read_file(path);
  if (format == GridFormat::csv) return decode_csv(text);
  return decode_grid_bin(std::vector<unsigned char>(text.begin(), text.end()));
}

}  // namespace sgw
