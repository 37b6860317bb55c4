#pragma once

#include "qheat/kernels.hpp"

namespace qheat::kernels {

// Reference complex multiply-accumulate shared by the scalar kernels and the
// SIMD tails. The SIMD bodies reproduce exactly this sequence:
//   re += xr*yr - xi*yi
//   im += xi*yr + xr*yi
inline void cmul_acc(double xr, double xi, double yr, double yi, double& re, double& im) {
  const double pr = xr * yr - xi * yi;
  const double pi = xi * yr + xr * yi;
  re = re + pr;
  im = im + pi;
}

}  // namespace qheat::kernels
