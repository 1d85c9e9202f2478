#pragma once

#include "hybridreg/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace hybridreg {

enum class SceneRecipe {
  Room,           // floor, three walls, boxes, tables, cylinders, small clutter
  TwoRooms,       // two rooms sharing a wall with a doorway
  PlaneDominant,  // floor and walls with a couple of large, blunt boxes
};

SceneRecipe parse_recipe(std::string_view name);  // "room", "two-rooms", "plane-dominant"
std::string to_string(SceneRecipe recipe);

struct ScenePair {
  PointCloud source;
  PointCloud target;
  RigidTransform t_gt;  // maps source coordinates into the target frame
  double gt_overlap = 0.0;
  double noise_sigma = 0.0;
  SceneRecipe recipe = SceneRecipe::Room;
  std::uint64_t seed = 0;
};

// Surface samples of a full scene, about one point per spacing^2 of area.
PointCloud sample_scene(SceneRecipe recipe, std::uint64_t seed, double spacing = 0.015);

// Crops two overlapping azimuthal views of the scene (the second view rotated until
// the shared fraction of source points is within 0.05 of `overlap`), moves the target
// view by `t`, then adds isotropic Gaussian noise to both. Deterministic per arguments.
// Throws GenerationError when the requested overlap cannot be met.
ScenePair synth_pair(SceneRecipe recipe, const RigidTransform& t, double overlap, double noise_sigma,
                     std::uint64_t seed, double spacing = 0.015);

// Fraction of source points with a target point within `radius` after applying t_gt.
double measure_overlap(const PointCloud& source, const PointCloud& target, const RigidTransform& t_gt,
                       double radius);

// Rotation about a uniformly random axis by an angle in [0, max_angle_deg], translation
// uniform in [-max_translation, max_translation]^3.
RigidTransform random_transform(std::mt19937_64& rng, double max_angle_deg, double max_translation);

}  // namespace hybridreg
