#pragma once

namespace tunable {

/// Principal branch W0 of the Lambert W function, i.e. the solution w >= -1
/// of w * exp(w) = x. Throws InvalidInput for x < -1/e.
double lambert_w0(double x);

}  // namespace tunable
