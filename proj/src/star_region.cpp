#include "pmclab/star_region.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pmclab {

StarRegion::StarRegion(std::shared_ptr<const SphereGrid> grid,
                       Eigen::Vector3d center, Eigen::ArrayXd log_radius)
    : grid_(std::move(grid)), center_(std::move(center)),
      log_radius_(std::move(log_radius)) {
  if (!grid_) throw Error("StarRegion: null grid");
  if (log_radius_.size() != grid_->size()) {
    throw Error("StarRegion: field size does not match grid");
  }
  if (!log_radius_.isFinite().all()) {
    throw Error("StarRegion: non-finite log-radius");
  }
}

StarRegion StarRegion::ball(std::shared_ptr<const SphereGrid> grid,
                            double radius, const Eigen::Vector3d& center) {
  if (!(radius > 0.0)) throw Error("StarRegion::ball: radius must be positive");
  Eigen::ArrayXd field =
      Eigen::ArrayXd::Constant(grid->size(), std::log(radius));
  return StarRegion(std::move(grid), center, std::move(field));
}

namespace {
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

void StarRegion::save(std::ostream& os) const {
  os << "pmclab-region 1\n";
  os << "n 2\n";
  os << "grid " << grid_->n_polar() << " " << grid_->n_azimuth() << "\n";
  os << "center " << fmt17(center_.x()) << " " << fmt17(center_.y()) << " "
     << fmt17(center_.z()) << "\n";
  for (int k = 0; k < log_radius_.size(); ++k) {
    os << fmt17(log_radius_[k]) << "\n";
  }
}

void StarRegion::save_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error("StarRegion: cannot open " + path + " for writing");
  save(os);
}

StarRegion StarRegion::load(std::istream& is,
                            std::shared_ptr<const SphereGrid> grid) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "pmclab-region" || version != 1) {
    throw Error("StarRegion: bad snapshot header");
  }
  std::string key;
  int n = 0;
  is >> key >> n;
  if (key != "n" || n != 2) throw Error("StarRegion: unsupported dimension");
  int np = 0, na = 0;
  is >> key >> np >> na;
  if (key != "grid") throw Error("StarRegion: missing grid line");
  Eigen::Vector3d center;
  is >> key >> center.x() >> center.y() >> center.z();
  if (key != "center") throw Error("StarRegion: missing center line");
  if (grid) {
    if (grid->n_polar() != np || grid->n_azimuth() != na) {
      throw Error("StarRegion: snapshot grid does not match supplied grid");
    }
  } else {
    grid = SphereGrid::product(np, na);
  }
  Eigen::ArrayXd field(static_cast<Eigen::Index>(np) * na);
  for (int k = 0; k < field.size(); ++k) {
    if (!(is >> field[k])) throw Error("StarRegion: truncated snapshot");
  }
  return StarRegion(std::move(grid), center, std::move(field));
}

StarRegion StarRegion::load_file(const std::string& path,
                                 std::shared_ptr<const SphereGrid> grid) {
  std::ifstream is(path);
  if (!is) throw Error("StarRegion: cannot open " + path);
  return load(is, std::move(grid));
}

void RegionPath::validate(double proxy_radius) const {
  if (nodes.size() < 2) throw Error("RegionPath: need at least 2 nodes");
  if (nodes.size() != t.size()) throw Error("RegionPath: node/parameter mismatch");
  if (t.front() != 0.0 || t.back() != 1.0) {
    throw Error("RegionPath: parameters must span [0, 1]");
  }
  for (size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error("RegionPath: parameters must increase");
  }
  const SphereGrid* g = &nodes.front().grid();
  for (const auto& r : nodes) {
    if (&r.grid() != g) throw Error("RegionPath: nodes must share one grid");
  }
  if (nodes.front().support_radius() > proxy_radius * (1.0 + 1e-12)) {
    throw Error("RegionPath: first node must be the empty-set proxy");
  }
}

}  // namespace pmclab
