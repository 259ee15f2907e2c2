#pragma once

#include <string>
#include <string_view>

#include "segtrack/core/raster.h"

namespace segtrack {

// Run-length mask text: "m<x0>,<y0>,<w0>,<h0>,<r1> <r2> ..." where the box
// is the bounding region of the positive pixels and the runs alternate
// 0s and 1s in row-major order inside it, starting with a (possibly empty)
// run of 0s. A trailing run of 0s is not written. An empty mask encodes as
// "m0,0,0,0,".
std::string rle_encode(const BinaryMask& mask);

// Inverse of rle_encode for a width x height mask. Throws RleError on
// malformed text, a region outside the mask, or runs longer than the region.
BinaryMask rle_decode(std::string_view line, int width, int height);

}  // namespace segtrack
