#include "gymtrack/cross_window.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace gymtrack;

namespace {

Point3 constant(int) { return {0, 0, 1}; }

WindowResult window(int start, std::vector<Tracklet3D> fragments) {
  WindowResult w;
  w.window_start = start;
  w.fragments = std::move(fragments);
  return w;
}

}  // namespace

TEST(WindowDistance, Examples) {
  const std::vector<Tracklet3D> prev{fixture::make_track(0, 0, 10, constant)};
  const std::vector<Tracklet3D> same{fixture::make_track(0, 5, 15, constant)};
  const std::vector<Tracklet3D> up{
      fixture::make_track(0, 5, 15, [](int) { return Point3(0, 0, 1.3); })};
  const std::vector<Tracklet3D> later{fixture::make_track(0, 11, 20, constant)};
  EXPECT_EQ(window_distance_matrix(prev, same).at(0, 0), std::optional<double>(0.0));
  EXPECT_NEAR(*window_distance_matrix(prev, up).at(0, 0), 0.3, 1e-12);
  EXPECT_FALSE(window_distance_matrix(prev, later).at(0, 0));
}

TEST(MergeAssigned, Examples) {
  const auto a = fixture::make_track(4, 0, 10, constant);
  const auto b = fixture::make_track(9, 5, 15, constant);
  const auto m = merge_assigned(a, b, 5, 5);
  EXPECT_EQ(m.track_id, 4);
  EXPECT_EQ(m.first_frame(), 0);
  EXPECT_EQ(m.last_frame(), 15);
  EXPECT_EQ(m.points.size(), 16u);
  for (const auto& [f, p] : m.points) EXPECT_EQ(p.position, Point3(0, 0, 1));

  const auto c = fixture::make_track(9, 5, 15, [](int) { return Point3(0, 0, 1.2); });
  const auto n = merge_assigned(a, c, 5, 5);
  for (int f = 0; f < 5; ++f) EXPECT_EQ(n.points.at(f).position.z(), 1.0);
  for (int f = 5; f < 10; ++f) EXPECT_NEAR(n.points.at(f).position.z(), 1.1, 1e-15);
  for (int f = 10; f <= 15; ++f) EXPECT_EQ(n.points.at(f).position.z(), 1.2);

  auto holey = c;
  holey.points.erase(7);
  EXPECT_EQ(merge_assigned(a, holey, 5, 5).points.at(7).position.z(), 1.0);
}

TEST(MergeAssigned, NewerLinksWin) {
  auto a = fixture::make_track(1, 0, 10, constant);
  a.view_links = {{0, 3}, {1, 4}};
  a.boxes[0][2] = {1, 1, 1, 1};
  a.boxes[0][8] = {2, 2, 2, 2};
  auto b = fixture::make_track(2, 5, 15, constant);
  b.view_links = {{0, 7}};
  b.boxes[0][8] = {5, 5, 5, 5};
  const auto m = merge_assigned(a, b, 5, 5);
  EXPECT_EQ(m.view_links.at(0), 7);
  EXPECT_EQ(m.view_links.at(1), 4);
  EXPECT_EQ(m.boxes.at(0).at(2).x, 1.0);
  EXPECT_EQ(m.boxes.at(0).at(8).x, 5.0);
}

TEST(TrackIds, Allocator) {
  TrackIdAllocator ids;
  EXPECT_EQ(ids.allocate(3), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(ids.allocate(0).empty());
  EXPECT_EQ(ids.next(), 3);
}

TEST(Stitcher, KeepsIdentityAcrossWindows) {
  TrackStitcher stitcher;
  auto path_a = [](int f) { return Point3(0.0, 0.02 * f, 1.5); };
  auto path_b = [](int f) { return Point3(1.5, -0.02 * f, 1.0); };
  std::vector<int> first_ids;
  for (int s = 0; s <= 50; s += 5) {
    // Alternate fragment order to make sure matching is by position.
    std::vector<Tracklet3D> frags{fixture::make_track(0, s, s + 10, path_a),
                                  fixture::make_track(1, s, s + 10, path_b)};
    if ((s / 5) % 2 == 1) std::swap(frags[0], frags[1]);
    const auto ids = stitcher.push(window(s, frags));
    const int id_a = (s / 5) % 2 == 1 ? ids[1] : ids[0];
    first_ids.push_back(id_a);
  }
  for (int id : first_ids) EXPECT_EQ(id, first_ids.front());
  ASSERT_EQ(stitcher.tracks().size(), 2u);
  const auto& a = stitcher.tracks().at(first_ids.front());
  EXPECT_EQ(a.first_frame(), 0);
  EXPECT_EQ(a.last_frame(), 60);
  EXPECT_EQ(a.points.size(), 61u);
}

TEST(Stitcher, FarFragmentStartsNewTrackAndGapsBreakChains) {
  TrackStitcher stitcher;
  stitcher.push(window(0, {fixture::make_track(0, 0, 10, constant)}));
  const auto moved = stitcher.push(
      window(5, {fixture::make_track(0, 5, 15, [](int) { return Point3(0, 0.7, 1); })}));
  EXPECT_EQ(moved[0], 1);
  EXPECT_EQ(stitcher.alive(), std::set<int>{1});
  // Window 10 is missing, so window 15 cannot continue track 1.
  const auto after_gap = stitcher.push(window(15, {fixture::make_track(0, 15, 25, [](int) {
                                                     return Point3(0, 0.7, 1);
                                                   })}));
  EXPECT_EQ(after_gap[0], 2);
  EXPECT_THROW(stitcher.push(window(15, {})), std::invalid_argument);
}
