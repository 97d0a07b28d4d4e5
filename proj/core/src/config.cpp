#include "gymtrack/config.hpp"

namespace gymtrack {

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  try {
    plane.validate();
    space.validate();
    target.criteria.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  require(window.length >= 2 && window.length % 2 == 0, "omega must be even and >= 2");
  require(window.step == window.length / 2, "window step must be omega / 2");
  require(window.min_observed >= 2, "min_observed must be >= 2");
  require(window.max_extrapolation >= 0, "max_extrapolation must be >= 0");
  require(stitch.step == window.step, "stitch step must equal the window step");
  require(iou.iou_threshold > 0.0 && iou.iou_threshold <= 1.0, "iou_threshold must lie in (0, 1]");
  require(iou.max_age >= 0, "max_age must be >= 0");
  require(lambda > 0.0, "lambda must be positive");
  require(cascade.tau > 0.0, "tau must be positive");
  require(cascade.nu > 0.0, "nu must be positive");
  require(cascade.theta_opp_deg > 0.0 && cascade.theta_opp_deg < 180.0, "theta_opp must lie in (0, 180)");
  require(stitch.unmatched_threshold > 0.0, "unmatched_threshold must be positive");
  require(target.max_gap >= 0, "max_gap must be >= 0");
  require(target.smooth_window >= 1 && target.smooth_window % 2 == 1, "smooth_window must be odd");
  require(target.alpha >= 1.0, "alpha must be >= 1");
  require(target.attach_radius > 0.0, "attach_radius must be positive");
  require(threads >= 1, "threads must be >= 1");
}

}  // namespace gymtrack
