#include "mrl/field_model.hpp"

#include <cmath>
#include <string>

#include "mrl/errors.hpp"

namespace mrl {

void validate(const WirePair& w) {
  if (!(w.current_amp > 0.0))
    throw ConfigError("wire pair: current must be > 0 A, got " +
                      std::to_string(w.current_amp));
  if (w.wire_a_nm == w.wire_b_nm)
    throw ConfigError("wire pair: wires must be at distinct positions");
  if (w.polarity != 1 && w.polarity != -1)
    throw ConfigError("wire pair: polarity must be +1 or -1, got " +
                      std::to_string(w.polarity));
}

static void check_inside(const WirePair& w, double x_nm) {
  if (!(x_nm > w.lo_nm() && x_nm < w.hi_nm()))
    throw NumericError("field position " + std::to_string(x_nm) +
                       " nm is not strictly inside the wire gap [" +
                       std::to_string(w.lo_nm()) + ", " +
                       std::to_string(w.hi_nm()) + "]");
}

double wire_field(const WirePair& w, double x_nm) {
  validate(w);
  check_inside(w, x_nm);
  const double k = units::mu0_over_2pi_gauss_nm_per_amp * w.current_amp;
  // 1/(lo-x) + 1/(hi-x): negative term from the wire behind, positive from
  // the wire ahead; exactly zero at the midpoint, odd about it.
  return w.polarity * k * (1.0 / (w.lo_nm() - x_nm) + 1.0 / (w.hi_nm() - x_nm));
}

double wire_field_gradient(const WirePair& w, double x_nm) {
  validate(w);
  check_inside(w, x_nm);
  const double k = units::mu0_over_2pi_gauss_nm_per_amp * w.current_amp;
  const double da = w.lo_nm() - x_nm;
  const double db = w.hi_nm() - x_nm;
  return w.polarity * k * (1.0 / (da * da) + 1.0 / (db * db));
}

double detuning_at(const WirePair& w, const ZeemanModel& z, double x_nm) {
  return z.gyromagnetic_mhz_per_gauss * wire_field(w, x_nm);
}

double linewidth_from_t2(double t2_us) {
  if (std::isinf(t2_us)) return 0.0;
  if (!(t2_us > 0.0))
    throw NumericError("linewidth: T2 must be > 0, got " + std::to_string(t2_us));
  return 1.0 / (M_PI * t2_us);
}

double resolution_limit(const ResolutionQuery& q) {
  if (q.linewidth_mhz < 0.0)
    throw NumericError("resolution: negative linewidth");
  const double g = std::fabs(q.zeeman_gradient_mhz_per_nm);
  if (g == 0.0) throw NumericError("resolution: zero Zeeman gradient");
  return q.linewidth_mhz / g;
}

}  // namespace mrl
