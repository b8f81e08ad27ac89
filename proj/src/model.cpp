#include "mixrabi/model.hpp"

#include <sstream>

namespace mixrabi {

void validate(const ModelParams& p, double g2_cap) {
  auto fail = [](const std::string& what) { throw InvalidParameter(what); };
  if (!std::isfinite(p.delta) || p.delta < 0.0) fail("delta must be finite and >= 0");
  if (!std::isfinite(p.g1) || p.g1 < 0.0) fail("g1 must be finite and >= 0");
  if (!std::isfinite(p.epsilon)) fail("epsilon must be finite");
  if (!std::isfinite(p.g2) || p.g2 < 0.0) fail("g2 must be finite and >= 0");
  if (p.g2 >= 0.5) fail("g2 must be < 1/2: the Bogoliubov frame is undefined at collapse");
  if (!(g2_cap < 0.5)) fail("g2 cap must stay below 1/2");
  if (p.g2 > g2_cap) {
    std::ostringstream os;
    os << "g2 = " << p.g2 << " exceeds the admissible cap " << g2_cap;
    fail(os.str());
  }
  if (p.g2 > kDefaultG2Cap) {
    std::ostringstream os;
    os << "g2 = " << p.g2 << " beyond " << kDefaultG2Cap
       << ": frame constants u, v, w' are badly conditioned near collapse";
    Warnings::add(os.str());
  }
}

BogoliubovFrame build_frame(const ModelParams& p) {
  validate(p, 0.5 - 1e-15);
  BogoliubovFrame f;
  static_cast<FrameT<double>&>(f) = make_frame<double>(p.g1, p.g2);
  f.r = std::acosh(f.u);
  return f;
}

double pole_energy(Family family, int n, const ModelParams& p) {
  if (n < 0) throw InvalidParameter("pole index must be >= 0");
  return pole_energy_t<double>(family, n, p.g1, p.g2);
}

double pole_gap(const ModelParams& p) {
  const double beta2 = 1.0 - 4.0 * p.g2 * p.g2;
  return p.g1 * p.g1 * 4.0 * p.g2 / beta2;
}

CollapseLimits collapse_limits(double g1) { return {-0.5 * (1.0 + g1 * g1), true}; }

}  // namespace mixrabi
