#pragma once

#include "mrl/units.hpp"

namespace mrl {

// A pair of parallel wires perpendicular to the gradient axis, carrying the
// same current. Between the wires the transverse field components add with
// opposite signs, so the field vanishes midway and grows monotonically
// toward either wire -- an approximately linear gradient across the middle
// of the gap.
struct WirePair {
  double wire_a_nm = 0.0;    // wire positions on the gradient axis
  double wire_b_nm = 0.0;    // must differ from wire_a_nm
  double current_amp = 0.0;  // > 0
  int polarity = +1;         // +1 or -1; -1 reverses the current direction

  double lo_nm() const { return wire_a_nm < wire_b_nm ? wire_a_nm : wire_b_nm; }
  double hi_nm() const { return wire_a_nm < wire_b_nm ? wire_b_nm : wire_a_nm; }
  double midpoint_nm() const { return 0.5 * (wire_a_nm + wire_b_nm); }
};

struct ZeemanModel {
  double gyromagnetic_mhz_per_gauss = units::default_gyromagnetic_mhz_per_gauss;
};

// Throws ConfigError unless the pair is well formed (distinct wires,
// positive current, polarity +-1).
void validate(const WirePair& w);

// Field (Gauss) at x, strictly inside the gap; odd about the midpoint.
// Throws NumericError when x is on or outside the wires.
double wire_field(const WirePair& w, double x_nm);

// Analytic d(field)/dx in Gauss/nm; same domain as wire_field.
double wire_field_gradient(const WirePair& w, double x_nm);

// Detuning (cyclic MHz) of a transition at x relative to the carrier at the
// field zero: gyromagnetic ratio times the local field.
double detuning_at(const WirePair& w, const ZeemanModel& z, double x_nm);

// Lorentzian FWHM linewidth (MHz) of a transition with dephasing time t2:
// 1/(pi*T2). Throws NumericError for t2 <= 0; +infinity gives 0.
double linewidth_from_t2(double t2_us);

// Smallest resolvable feature (nm): linewidth divided by the Zeeman detuning
// gradient. Throws NumericError on zero gradient or negative linewidth.
struct ResolutionQuery {
  double linewidth_mhz = 0.0;
  double zeeman_gradient_mhz_per_nm = 0.0;
};
double resolution_limit(const ResolutionQuery& q);

}  // namespace mrl
