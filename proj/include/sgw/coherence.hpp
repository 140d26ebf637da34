#pragma once

#include <filesystem>
#include <functional>
#include <utility>
#include <vector>

#include "sgw/params.hpp"

namespace sgw {

enum class DeltaMethod { analytic, quadrature };

/// Coherence norm: the phase-space integral of |W+-| at time t (1 at t = 0).
/// The analytic method uses the closed-form Gaussian volume. The quadrature
/// method integrates the modulus assembled from the raw C1..C6 coefficients
/// over a +-10 sigma box, so the two are independent evaluations.
/// Throws NotPositiveDefinite if the modulus is not a normalizable Gaussian.
double delta(const Model& model, double t, DeltaMethod method = DeltaMethod::analytic);

/// ln delta, finite long after delta itself underflows.
double log_delta(const Model& model, double t);

/// Time at which delta_fn falls to delta_fn(0) / e, by bisection in log t.
/// Requires delta_fn(t_lo) > target > delta_fn(t_hi), else BracketInvalid.
/// Stops once the bracket is narrower than 1e-4 relative and the value is
/// within 1e-6 of the target.
double decoherence_time(const std::function<double(double)>& delta_fn, double t_lo, double t_hi);
double decoherence_time(const Model& model, double t_lo, double t_hi);

/// Bracket from the sampling grid of 64 points per decade over [1e-9, 1] s.
std::pair<double, double> find_bracket(const Model& model);
double decoherence_time(const Model& model);

/// Comparison value cbrt(3 hbar^2 m^2 gamma^2 / (4 D eta^2 lambda^2)).
double venugopalan_time(const Model& model);

struct CoherenceSample {
  double t;
  double delta;
};

struct CoherenceCurve {
  double gamma = 0.0;
  std::vector<CoherenceSample> samples;
};

struct CoherenceOptions {
  DeltaMethod method = DeltaMethod::analytic;
  /// Multiply the curve by |a b*|; the decoherence time is unaffected.
  bool spin_prefactor = false;
  int per_decade = 64;
  double t_min = 1e-9;
  double t_max = 1.0;
  /// The curve stops at the first sample below this fraction of its start.
  double floor = 1e-8;
};

/// t = 0 followed by the logarithmic grid, clipped at `floor`.
CoherenceCurve coherence_curve(const Model& model, const CoherenceOptions& opts = {});

struct PowerLawFit {
  double a = 0.0;  // in units of time_unit
  double b = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double residual = 0.0;  // rms of ln t_d residuals
  std::size_t n = 0;
  double time_unit = 1e-6;  // seconds per unit of a
};

/// Least squares of ln t_d against ln gamma with ordinary standard errors.
/// Needs at least 4 positive points (InsufficientData).
PowerLawFit fit_power_law(const std::vector<double>& gammas, const std::vector<double>& t_d,
                          double time_unit = 1e-6);

struct ScanPoint {
  double gamma;
  double t_d;
  double venugopalan;
  CoherenceCurve curve;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  PowerLawFit fit;
  /// Set when the fit residual is 0.05 or more.
  bool flagged = false;
};

/// Decoherence times for each gamma (in parallel) and their power-law fit.
/// The gammas must number at least 4 and span at least 4 decades.
ScanResult scan_and_fit(const Model& base, const std::vector<double>& gammas, const CoherenceOptions& opts = {});

void write_curve(const CoherenceCurve& curve, const std::filesystem::path& path);
/// Columns gamma,t_d,t_venugopalan.
void write_td_table(const ScanResult& scan, const std::filesystem::path& path);
/// Reads gamma and t_d columns from a table written by write_td_table.
std::pair<std::vector<double>, std::vector<double>> read_td_table(const std::filesystem::path& path);
void write_fit(const PowerLawFit& fit, const std::filesystem::path& path);

}  // namespace sgw
