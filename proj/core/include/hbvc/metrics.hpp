#pragma once

#include "hbvc/ops.hpp"

namespace hbvc {

// RGB PSNR in dB over [0,1] pixels; identical inputs report the 100 dB cap.
double psnr(const Tensor& a, const Tensor& b);

// Multi-scale SSIM with the standard 5-scale weights; the Gaussian window
// shrinks to fit small scales (harnessed inputs are 64x64).
double ms_ssim(const Tensor& a, const Tensor& b);
Var ms_ssim_var(const Var& a, const Var& b);  // differentiable form

}  // namespace hbvc
