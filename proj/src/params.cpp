#include "fracp/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracp/error.hpp"

namespace fracp {

void validate(const Params& params) {
  if (!(params.s > 0.0 && params.s < 1.0)) {
    std::ostringstream os;
    os << "s = " << params.s << " violates 0<s<1";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
  if (!(params.p > 1.0) || !std::isfinite(params.p)) {
    std::ostringstream os;
    os << "p = " << params.p << " violates 1<p<inf";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
  if (params.dim != 1 && params.dim != 2) {
    std::ostringstream os;
    os << "dim = " << params.dim << " not in {1,2}";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
}

double unit_ball_measure(int dim) {
  // pi^{N/2} / Gamma(N/2 + 1)
  const double n = static_cast<double>(dim);
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace fracp
