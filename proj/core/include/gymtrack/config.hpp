#pragma once

#include "gymtrack/cascade.hpp"
#include "gymtrack/cross_window.hpp"
#include "gymtrack/geometry.hpp"
#include "gymtrack/sv_track.hpp"
#include "gymtrack/target.hpp"
#include "gymtrack/tracklet.hpp"

#include <stdexcept>
#include <string>

namespace gymtrack {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline. Defaults are the tracker's standard values.
struct PipelineConfig {
  PlaneSpec plane;
  TrackingSpace space = TrackingSpace::from_bounds({-1.0, -3.0, 0.0, 1.0, 3.0, 3.5}, 1.0);
  IouTrackerParams iou;
  WindowParams window;
  double lambda = 0.3;
  CascadeParams cascade;
  StitchParams stitch;
  TargetParams target;
  unsigned threads = 1;

  /// Throws ConfigError on values the pipeline cannot run with.
  void validate() const;
};

}  // namespace gymtrack
