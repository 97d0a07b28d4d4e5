#include "gymtrack/eval.hpp"

#include <algorithm>

namespace gymtrack {

namespace {

bool in_range(int frame, const EvalOptions& o) {
  return (!o.from || frame >= *o.from) && (!o.to || frame <= *o.to);
}

const TruthPerson* find_target(const TruthFrame& tf) {
  for (const auto& p : tf.persons)
    if (p.is_target) return &p;
  return nullptr;
}

}  // namespace

int id_switches(const std::map<int, int>& timeline) {
  int switches = 0;
  std::optional<int> prev;
  for (const auto& [frame, id] : timeline) {
    if (prev && *prev != id) ++switches;
    prev = id;
  }
  return switches;
}

AedResult aed(const std::map<int, Point3>& estimate, const std::map<int, Point3>& truth) {
  AedResult r;
  r.truth_frames = static_cast<int>(truth.size());
  double sum = 0.0;
  for (const auto& [frame, X] : truth) {
    const auto it = estimate.find(frame);
    if (it == estimate.end()) continue;
    sum += (it->second - X).norm();
    ++r.evaluated;
  }
  if (r.evaluated == 0) {
    throw EvalError(EvalError::Code::EmptyOverlap, "no frame has both an estimate and ground truth");
  }
  r.aed = sum / r.evaluated;
  return r;
}

bool buffered_box_fails(const Bbox& buffered, const Bbox& truth) {
  const double side = buffered.max_side();
  if (truth.max_side() < 0.5 * side) return true;
  const double half = 0.5 * side;
  return truth.x - 0.5 * truth.w < buffered.x - half || truth.x + 0.5 * truth.w > buffered.x + half ||
         truth.y - 0.5 * truth.h < buffered.y - half || truth.y + 0.5 * truth.h > buffered.y + half;
}

FailureResult failure_rate(std::span<const TargetRecord> records, std::span<const TruthFrame> truth) {
  std::map<int, const TruthPerson*> by_frame;
  for (const auto& tf : truth)
    if (const auto* p = find_target(tf)) by_frame[tf.frame] = p;

  FailureResult r;
  for (const auto& rec : records) {
    const auto it = by_frame.find(rec.frame);
    if (it == by_frame.end()) continue;
    for (const auto& v : rec.per_view) {
      if (!v.buffered) continue;
      for (const auto& tv : it->second->views) {
        if (tv.camera != v.camera || !tv.visible) continue;
        ++r.evaluated;
        if (buffered_box_fails(v.box, tv.box)) ++r.failures;
      }
    }
  }
  return r;
}

EvalReport evaluate(std::span<const TargetRecord> records, std::span<const TruthFrame> truth,
                    const EvalOptions& options) {
  std::vector<TargetRecord> kept;
  for (const auto& r : records)
    if (in_range(r.frame, options)) kept.push_back(r);
  std::vector<TruthFrame> kept_truth;
  for (const auto& tf : truth)
    if (in_range(tf.frame, options)) kept_truth.push_back(tf);

  std::map<int, int> timeline;
  std::map<int, Point3> estimate;
  for (const auto& r : kept) {
    timeline[r.frame] = r.track_id;
    estimate[r.frame] = r.X;
  }
  std::map<int, Point3> gt;
  for (const auto& tf : kept_truth)
    if (const auto* p = find_target(tf)) gt[tf.frame] = p->X;

  EvalReport report;
  report.id_switches = id_switches(timeline);
  const auto a = aed(estimate, gt);
  report.aed_m = a.aed;
  report.coverage = a.coverage();
  report.evaluated_frames = a.evaluated;
  report.outage_frames = a.truth_frames - a.evaluated;
  const auto fr = failure_rate(kept, kept_truth);
  report.failure_rate = fr.rate();
  report.evaluated_boxes = fr.evaluated;

  if (options.window > 0 && !gt.empty()) {
    const int first = gt.begin()->first;
    const int last = gt.rbegin()->first;
    for (int start = first; start <= last; start += options.window) {
      const int end = start + options.window - 1;
      WindowStats w;
      w.start = start;
      double sum = 0.0;
      for (auto it = gt.lower_bound(start); it != gt.end() && it->first <= end; ++it) {
        ++w.truth_frames;
        const auto e = estimate.find(it->first);
        if (e == estimate.end()) continue;
        sum += (e->second - it->second).norm();
        ++w.evaluated;
      }
      if (w.evaluated > 0) w.aed = sum / w.evaluated;
      std::vector<TargetRecord> in_window;
      for (const auto& r : kept)
        if (r.frame >= start && r.frame <= end) in_window.push_back(r);
      w.failure_rate = failure_rate(in_window, kept_truth).rate();
      report.per_window.push_back(w);
    }
  }
  return report;
}

}  // namespace gymtrack
