#pragma once

#include "gymtrack/sim.hpp"
#include "gymtrack/target.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gymtrack {

class EvalError : public std::runtime_error {
 public:
  enum class Code { EmptyOverlap };
  EvalError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Number of changes between consecutive assigned ids. Frames without an
/// id are skipped, so an outage followed by a new id counts once.
int id_switches(const std::map<int, int>& timeline);

struct AedResult {
  double aed = 0.0;
  int evaluated = 0;  // frames with estimate and truth
  int truth_frames = 0;
  double coverage() const { return truth_frames > 0 ? static_cast<double>(evaluated) / truth_frames : 0.0; }
};

/// Mean distance over frames present in both maps. Throws
/// EvalError(EmptyOverlap) when no frame is shared.
AedResult aed(const std::map<int, Point3>& estimate, const std::map<int, Point3>& truth);

/// Fails when the ground-truth box is shorter than half the buffered side or
/// not contained in it (boundary inclusive).
bool buffered_box_fails(const Bbox& buffered, const Bbox& truth);

struct FailureResult {
  int failures = 0;
  int evaluated = 0;
  double rate() const { return evaluated > 0 ? static_cast<double>(failures) / evaluated : 0.0; }
};

FailureResult failure_rate(std::span<const TargetRecord> records, std::span<const TruthFrame> truth);

struct EvalOptions {
  int window = 10;
  std::optional<int> from;  // inclusive frame range
  std::optional<int> to;
};

struct WindowStats {
  int start = 0;
  int evaluated = 0;
  int truth_frames = 0;
  std::optional<double> aed;
  double failure_rate = 0.0;
};

struct EvalReport {
  int id_switches = 0;
  double aed_m = 0.0;
  double failure_rate = 0.0;
  double coverage = 0.0;
  int outage_frames = 0;
  int evaluated_frames = 0;
  int evaluated_boxes = 0;
  std::vector<WindowStats> per_window;
};

/// Scores target records against the simulator ground truth.
EvalReport evaluate(std::span<const TargetRecord> records, std::span<const TruthFrame> truth,
                    const EvalOptions& options = {});

}  // namespace gymtrack
