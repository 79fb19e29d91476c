#pragma once

#include <vector>

namespace crackweak::detail {

/// Normalized 1-D Gaussian taps for standard deviation sigma, radius
/// ceil(3*sigma). Center tap is at index radius.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing of a float field, replicated borders.
/// Used for the elastic displacement fields, where single precision is plenty.
void smooth_field(std::vector<float>& field, int width, int height, double sigma);

/// Separable Gaussian smoothing of a double buffer, replicated borders.
/// Double precision path for brightness rasters, where the result is rounded
/// back to integers and must match an independent convolution oracle.
void smooth_buffer(std::vector<double>& buffer, int width, int height, double sigma);

}  // namespace crackweak::detail
