#pragma once

#include "apdiff/apfun.hpp"
#include "apdiff/combs.hpp"
#include "apdiff/cps.hpp"
#include "apdiff/functions.hpp"

namespace testing_support {

using namespace apdiff;

struct SineSystem {
  CutProjectScheme scheme;
  WeightFunction weight;
  DeformationMap deformation;
};

// l + eps sin(2 pi alpha l), unit weights.
inline SineSystem sine_system(double eps, double alpha) {
  CutProjectScheme scheme = sine_scheme(alpha);
  const InternalSpace& h = scheme.internal();
  WeightFunction f = WeightFunction::constant(h, 1.0);
  DeformationMap p = DeformationMap::torus_trig(h, ApFunction::real_vector(1, {sine_tone({1.0}, eps)}));
  return {scheme, f, p};
}

inline SineSystem integer_system() {
  CutProjectScheme scheme = integer_scheme();
  return {scheme, WeightFunction::constant(scheme.internal(), 1.0), DeformationMap::zero(scheme.internal(), 1)};
}

}  // namespace testing_support
