#include <random>

#include "doctest.h"
#include "dsr/clustering.hpp"
#include "support.hpp"

using namespace dsr;

namespace {

TravelMatrix random_points(const std::vector<std::string>& names, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0, 100);
  std::vector<Location> pts;
  for (const auto& n : names) pts.push_back({n, U(rng), U(rng)});
  return euclidean_matrix(pts, 1.0);
}

}  // namespace

TEST_CASE("a single depot takes every site") {
  TravelMatrix t = euclidean_matrix({{"D1", 0, 0}, {"a", 5, 5}, {"b", 50, 1}}, 1.0);
  CHECK(assign_sites_to_depots({"a", "b"}, {"D1"}, t) == std::vector<std::size_t>{0, 0});
}

TEST_CASE("equidistant sites go to the smaller depot id") {
  TravelMatrix t = euclidean_matrix({{"D2", 10, 0}, {"D1", -10, 0}, {"s", 0, 0}}, 1.0);
  CHECK(assign_sites_to_depots({"s"}, {"D2", "D1"}, t) == std::vector<std::size_t>{1});
}

TEST_CASE("nearest-depot assignment minimizes total travel against exhaustive search") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> sites{"s1", "s2", "s3", "s4", "s5", "s6"};
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<std::string> depots{"D1", "D2", "D3"};
    std::vector<std::string> names = depots;
    names.insert(names.end(), sites.begin(), sites.end());
    TravelMatrix t = random_points(names, rng);
    auto got = assign_sites_to_depots(sites, depots, t);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> a(sites.size(), 0);
    for (std::size_t code = 0; code < 729; ++code) {
      for (std::size_t i = 0, c = code; i < sites.size(); ++i, c /= 3) a[i] = c % 3;
      best = std::min(best, clustering_cost(sites, depots, a, t));
    }
    CHECK(clustering_cost(sites, depots, got, t) == doctest::Approx(best));
  }
}

TEST_CASE("one crew takes the whole cluster") {
  TravelMatrix t = euclidean_matrix({{"D1", 0, 0}, {"a", 5, 5}, {"b", 50, 1}}, 1.0);
  CHECK(assign_sites_to_crews({"a", "b"}, {"C1"}, "D1", t) == std::vector<std::size_t>{0, 0});
}

TEST_CASE("four symmetric sites split two and two") {
  TravelMatrix t =
      euclidean_matrix({{"D1", 0, 0}, {"a", -10, 1}, {"b", -10, -1}, {"c", 10, 1}, {"d", 10, -1}}, 1.0);
  auto got = assign_sites_to_crews({"a", "b", "c", "d"}, {"C1", "C2"}, "D1", t);
  CHECK(got[0] == got[1]);
  CHECK(got[2] == got[3]);
  CHECK(got[0] != got[2]);
}

TEST_CASE("crew split respects the balance cap and keeps every crew busy") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const std::vector<std::string> sites{"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"};
    for (std::size_t k : {2u, 3u}) {
      std::vector<std::string> crews;
      for (std::size_t c = 0; c < k; ++c) crews.push_back("C" + std::to_string(c + 1));
      std::vector<std::string> names{"D1"};
      names.insert(names.end(), sites.begin(), sites.end());
      TravelMatrix t = random_points(names, rng);
      auto got = assign_sites_to_crews(sites, crews, "D1", t);
      std::vector<std::size_t> load(k, 0);
      for (auto c : got) ++load[c];
      for (auto l : load) {
        CHECK(l >= 1);
        CHECK(l <= (sites.size() + k - 1) / k);
      }
    }
  }
}
