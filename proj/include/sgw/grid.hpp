#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "sgw/params.hpp"

namespace sgw {

/// Uniform lattice over [z_min, z_max] x [p_min, p_max], end points included.
struct PhaseSpaceGrid {
  double z_min = -1.0, z_max = 1.0;
  double p_min = -1.0, p_max = 1.0;
  std::uint32_t n_z = 8, n_p = 8;

  /// Throws InvalidParameter unless both counts are >= 8 and the bounds are
  /// finite and strictly ordered.
  void validate() const;

  double dz() const noexcept { return (z_max - z_min) / (n_z - 1); }
  double dp() const noexcept { return (p_max - p_min) / (n_p - 1); }
  double z(std::size_t i) const noexcept { return z_min + static_cast<double>(i) * dz(); }
  double p(std::size_t j) const noexcept { return p_min + static_cast<double>(j) * dp(); }
  std::size_t size() const noexcept { return std::size_t{n_z} * n_p; }

  bool operator==(const PhaseSpaceGrid&) const = default;
};

enum class FieldKind { trace, diag_plus, diag_minus, offdiag_re, offdiag_im, offdiag_abs };

/// "trace", "diag+", "diag-", "offdiag-re", "offdiag-im", "offdiag-abs".
std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view s);

/// Real samples on a grid. values[i * n_p + j] is the node (z_i, p_j).
struct WignerField {
  PhaseSpaceGrid grid;
  FieldKind kind = FieldKind::trace;
  std::vector<double> values;
  double t = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * grid.n_p + j]; }
  /// Riemann sum of the values times dz dp.
  double mass() const noexcept;
  double max() const noexcept;
};

/// Evaluates one component of the closed-form solution at every node. The
/// trace and diagonal kinds include the spin weights |a|^2, |b|^2; the
/// off-diagonal kinds are W+- itself, without a b*.
WignerField sample(FieldKind kind, double t, const PhaseSpaceGrid& grid, const Model& model);

/// Window of +-(|z_c| + n_sigmas sigma_z) by +-(|p_c| + n_sigmas sigma_p).
PhaseSpaceGrid auto_window(double t, const Model& model, double n_sigmas, std::uint32_t n_z = 201,
                           std::uint32_t n_p = 201);

struct FieldPeak {
  double z, p, value;
  std::size_t i, j;  // lattice node
};

/// Interior strict local maxima (over the 8 neighbours) at least
/// `rel_threshold` times the global maximum, located to sub-cell accuracy by
/// a parabola through each axis. Sorted by z.
std::vector<FieldPeak> find_local_maxima(const WignerField& field, double rel_threshold = 1e-3);

// Export formats.
//
// csv: "# kind,t,n_z,n_p,z_min,z_max,p_min,p_max", then "# " and those
// values, then the column line "z,p,value" and one row per node in storage
// order, all numbers with 17 significant digits.
//
// grid-bin, little endian: "WSG1", 4 zero bytes, z_min z_max p_min p_max as
// f64 at offset 8, n_z n_p as u32 at 40, 16 zero bytes, then the values as
// f64 in storage order. The kind and t are not stored.
inline constexpr std::size_t kGridBinHeader = 64;

enum class GridFormat { csv, grid_bin };
GridFormat parse_grid_format(std::string_view s);

std::string encode_csv(const WignerField& field);
std::vector<unsigned char> encode_grid_bin(const WignerField& field);
WignerField decode_csv(std::string_view text);
WignerField decode_grid_bin(const std::vector<unsigned char>& bytes);

void export_field(const WignerField& field, const std::filesystem::path& path, GridFormat format);
WignerField import_field(const std::filesystem::path& path, GridFormat format);

}  // namespace sgw
