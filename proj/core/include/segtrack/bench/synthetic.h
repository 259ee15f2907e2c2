#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segtrack/core/sequence.h"

namespace segtrack {

enum class Shape { Rect, Ellipse };

std::string_view to_string(Shape shape);
// "rect" or "ellipse"; throws ConfigError otherwise.
Shape parse_shape(std::string_view name);

// One moving shape over a textured background. The target carries its own
// texture so correlation trackers have something to lock on to.
struct SyntheticSpec {
  std::string name = "synth";
  Shape shape = Shape::Rect;
  int width = 200;
  int height = 120;
  int frames = 60;
  double obj_w = 20.0;
  double obj_h = 20.0;
  // Center on frame 0; defaults to (40, height/2).
  std::optional<double> cx0;
  std::optional<double> cy0;
  double vx = 2.0;  // pixels per frame
  double vy = 0.0;
  Rgb fg{230, 200, 40};
  Rgb bg{30, 40, 110};
  int texture = 20;  // amplitude of the static background/target texture
  int noise = 0;     // amplitude of per-frame pixel noise
  std::uint64_t seed = 7;
  // Reflect the trajectory at the frame borders instead of leaving.
  bool bounce = false;
  // Permit frames where the target is entirely outside.
  bool allow_exit = false;
};

// Deterministic for a given spec: every byte comes from std::mt19937_64 raw
// output seeded with spec.seed. The object has id 1. Throws ParameterError
// on invalid sizes and DataError when the shape leaves the frame entirely
// (unless allow_exit).
Sequence gen_synthetic(const SyntheticSpec& spec);

// `count` sequences named <name>_000, <name>_001, ...; sequence i uses seed
// spec.seed + i and a start row jittered from it.
std::vector<Sequence> gen_synthetic_set(const SyntheticSpec& spec, int count);

// Positive pixels of the shape with the given center and size.
BinaryMask shape_mask(Shape shape, double cx, double cy, double w, double h, int width,
                      int height);

}  // namespace segtrack
