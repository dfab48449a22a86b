#pragma once

// JSON (de)serialization for surfaces and feature templates, plus small
// file helpers. Formats:
//
//   surface:  {"M":.., "N":.., "knots_u":[..], "knots_v":[..],
//              "points":[[x,y,z], ..]}        points in b order (m*N+n)
//   features: {"names":[..], "uv":[[u,v],..], "eyes":[i,j]}

#include "bsurf/surface.hpp"

#include <filesystem>
#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

namespace bsurf {

using Json = nlohmann::json;

// Named (u,v) anchor points on the surface; `eyes` are the indices of the
// two eye centers whose surface distance normalizes all error metrics.
struct FeatureTemplate {
  std::vector<std::string> names;
  UVSamplesd uv;
  Index eye_left = -1;
  Index eye_right = -1;

  Index count() const { return uv.rows(); }
};

Json to_json(const Surfaced& surf);
Surfaced surface_from_json(const Json& j);

Json to_json(const FeatureTemplate& features);
FeatureTemplate features_from_json(const Json& j);

Json load_json(const std::filesystem::path& path);
void save_json(const Json& j, const std::filesystem::path& path);

void save_surface(const Surfaced& surf, const std::filesystem::path& path);
Surfaced load_surface(const std::filesystem::path& path);
void save_features(const FeatureTemplate& features, const std::filesystem::path& path);
FeatureTemplate load_features(const std::filesystem::path& path);

}  // namespace bsurf
