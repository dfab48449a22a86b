#include "bsurf/serialize.hpp"

#include "bsurf/errors.hpp"

#include <fstream>

namespace bsurf {

Json to_json(const Surfaced& surf) {
  Json j;
  j["M"] = surf.grid.rows();
  j["N"] = surf.grid.cols();
  j["knots_u"] = std::vector<double>(surf.knots_u.knots().begin(), surf.knots_u.knots().end());
  j["knots_v"] = std::vector<double>(surf.knots_v.knots().begin(), surf.knots_v.knots().end());
  Json pts = Json::array();
  for (Index i = 0; i < surf.grid.size(); ++i) {
    const auto row = surf.grid.points().row(i);
    pts.push_back({row[0], row[1], row[2]});
  }
  j["points"] = std::move(pts);
  return j;
}

Surfaced surface_from_json(const Json& j) {
  const Index m = j.at("M").get<Index>();
  const Index n = j.at("N").get<Index>();
  const auto ku = j.at("knots_u").get<std::vector<double>>();
  const auto kv = j.at("knots_v").get<std::vector<double>>();
  const auto& pts = j.at("points");
  if (static_cast<Index>(pts.size()) != m * n)
    throw IoError("surface json: points count != M*N");
  Points3d grid_pts(m * n, 3);
  for (Index i = 0; i < m * n; ++i)
    for (int c = 0; c < 3; ++c) grid_pts(i, c) = pts[i][c].get<double>();
  return Surfaced(ControlGridd(m, n, std::move(grid_pts)),
                  KnotVectord(Eigen::Map<const Eigen::VectorXd>(ku.data(), ku.size())),
                  KnotVectord(Eigen::Map<const Eigen::VectorXd>(kv.data(), kv.size())));
}

Json to_json(const FeatureTemplate& features) {
  Json j;
  j["names"] = features.names;
  Json uv = Json::array();
  for (Index i = 0; i < features.count(); ++i)
    uv.push_back({features.uv(i, 0), features.uv(i, 1)});
  j["uv"] = std::move(uv);
  j["eyes"] = {features.eye_left, features.eye_right};
  return j;
}

FeatureTemplate features_from_json(const Json& j) {
  FeatureTemplate f;
  f.names = j.at("names").get<std::vector<std::string>>();
  const auto& uv = j.at("uv");
  f.uv.resize(static_cast<Index>(uv.size()), 2);
  for (Index i = 0; i < f.uv.rows(); ++i) {
    f.uv(i, 0) = uv[i][0].get<double>();
    f.uv(i, 1) = uv[i][1].get<double>();
  }
  const auto eyes = j.at("eyes").get<std::vector<Index>>();
  if (eyes.size() != 2) throw IoError("features json: eyes must list two indices");
  f.eye_left = eyes[0];
  f.eye_right = eyes[1];
  if (static_cast<size_t>(f.count()) != f.names.size())
    throw IoError("features json: names/uv size mismatch");
  if (f.eye_left < 0 || f.eye_left >= f.count() || f.eye_right < 0 || f.eye_right >= f.count())
    throw IoError("features json: eye index out of range");
  return f;
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Json j;
  in >> j;
  return j;
}

void save_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void save_surface(const Surfaced& surf, const std::filesystem::path& path) {
  save_json(to_json(surf), path);
}

Surfaced load_surface(const std::filesystem::path& path) {
  return surface_from_json(load_json(path));
}

void save_features(const FeatureTemplate& features, const std::filesystem::path& path) {
  save_json(to_json(features), path);
}

FeatureTemplate load_features(const std::filesystem::path& path) {
  return features_from_json(load_json(path));
}

}  // namespace bsurf
