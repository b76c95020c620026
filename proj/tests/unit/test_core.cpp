#include "mfml/dataset.hpp"
#include "mfml/digest.hpp"
#include "mfml/errors.hpp"
#include "mfml/log.hpp"
#include "mfml/random.hpp"
#include "mfml/split.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace mfml;

namespace {

Dataset ten_identities() {
  Eigen::MatrixXd x(20, 2);
  std::vector<std::string> ids;
  std::vector<int> cams;
  for (int i = 0; i < 10; ++i) {
    for (int c = 0; c < 2; ++c) {
      x.row(2 * i + c) << i, c;
      ids.push_back("id" + std::to_string(i));
      cams.push_back(c);
    }
  }
  return make_dataset(x, ids, cams);
}

struct SilenceWarnings {
  std::vector<std::string> seen;
  WarningSink previous;
  SilenceWarnings() {
    previous = set_warning_sink([this](std::string_view m) { seen.emplace_back(m); });
  }
  ~SilenceWarnings() { set_warning_sink(previous); }
};

}  // namespace

TEST(LoadFeatures, FourRowsPreserveOrder) {
  const auto ds = load_features(fixture::fixture_path("four_rows.csv"));
  ASSERT_EQ(ds.size(), 4u);
  EXPECT_EQ(ds.dim(), 3u);
  EXPECT_EQ(ds.identities, (std::vector<std::string>{"a", "b", "a", "c"}));
  EXPECT_EQ(ds.cameras, (std::vector<int>{0, 1, 1, 0}));
  EXPECT_EQ(ds.features(0, 0), 1.5);
  EXPECT_EQ(ds.features(3, 0), -1e-3);
  EXPECT_EQ(ds.features(3, 2), 8.0);
}

TEST(LoadFeatures, InfiniteValueNamesRow) {
  try {
    load_features(fixture::fixture_path("bad_inf.csv"));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadFeatures, MalformedInputs) {
  const auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_features(in);
  };
  EXPECT_THROW(read("id,cam,f1\na,0,1\nb,0,2,3\n"), InputError);
  EXPECT_THROW(read("id,cam,f1\na,0,1\nb,x,2\n"), InputError);
  EXPECT_THROW(read("id,cam,f1\na,0,1\nb,0,abc\n"), InputError);
  EXPECT_THROW(read("id,cam,f1\na,0,nan\nb,0,1\n"), InputError);
  EXPECT_THROW(read("id,cam,f1\na,0,1\n"), InputError);
  EXPECT_THROW(read(""), InputError);
  EXPECT_THROW(load_features("/nonexistent/features.csv"), InputError);
}

TEST(LoadFeatures, RoundTripIsExact) {
  mfml::Rng rng(3);
  Eigen::MatrixXd x = fixture::gaussian(7, 4, rng, 1e3);
  x(0, 0) = 1e-300;
  x(1, 1) = -0.1;
  const auto ds = make_dataset(x, {"a", "b", "c", "a", "b", "c", "z"}, {0, 1, 0, 1, 0, 1, 3});
  std::stringstream s;
  write_features(s, ds);
  const auto back = read_features(s);
  EXPECT_EQ(back.identities, ds.identities);
  EXPECT_EQ(back.cameras, ds.cameras);
  EXPECT_TRUE((back.features.array() == ds.features.array()).all());
}

TEST(IndexClasses, SixRowFixtureCounts) {
  const auto ds = load_features(fixture::fixture_path("six_abc.csv"));
  const auto idx = index_classes(ds, all_indices(ds));
  EXPECT_EQ(idx.num_classes(), 3u);
  EXPECT_EQ(idx.counts, (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(idx.classes, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(IndexClasses, SingleIdentityAndEmpty) {
  const auto ds = make_dataset(Eigen::MatrixXd::Ones(3, 2), {"x", "x", "x"}, {0, 1, 2});
  const auto idx = index_classes(ds, all_indices(ds));
  EXPECT_EQ(idx.num_classes(), 1u);
  EXPECT_EQ(idx.counts, std::vector<std::size_t>{3});
  EXPECT_THROW(index_classes(ds, std::vector<std::size_t>{}), InputError);
  EXPECT_THROW(index_classes(ds, std::vector<std::size_t>{0, 0}), InputError);
  EXPECT_THROW(index_classes(ds, std::vector<std::size_t>{5}), InputError);
}

TEST(IndexClasses, MixedSubsetMatchesHandTally) {
  // rows 1(a) 2(b) 3(b) 4(c) 5(c) -> a:1 b:2 c:2
  const auto ds = load_features(fixture::fixture_path("six_abc.csv"));
  const std::vector<std::size_t> subset{5, 1, 3, 2, 4};
  const auto idx = index_classes(ds, subset);
  EXPECT_EQ(idx.counts, (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(idx.members[2], (std::vector<std::size_t>{5, 4}));
  EXPECT_EQ(idx.positions[2], (std::vector<std::size_t>{0, 4}));
}

TEST(IndexClasses, CountsSumToSubsetSize) {
  const auto ds = fixture::clusters(7, 3, 2, 1.0, 11);
  mfml::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto rows = all_indices(ds);
    rng.shuffle(rows);
    rows.resize(1 + rng.uniform_index(rows.size()));
    const auto idx = index_classes(ds, rows);
    std::size_t total = 0;
    for (auto c : idx.counts) total += c;
    EXPECT_EQ(total, rows.size());
  }
}

TEST(Rng, MatchesStandardEngine) {
  // 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(1);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(rng.uniform_index(bound), bound);
  }
  EXPECT_EQ(rng.uniform_index(0), 0u);
}

TEST(Rng, Uniform01AndNormalAreSane) {
  Rng rng(2);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Split, TwoIdentities) {
  const auto ds = make_dataset(Eigen::MatrixXd::Random(4, 2), {"a", "a", "b", "b"}, {0, 1, 0, 1});
  const auto plan = make_split(ds, 0, 0.5);
  EXPECT_EQ(plan.train_ids.size(), 1u);
  EXPECT_EQ(plan.test_ids.size(), 1u);
  EXPECT_NE(plan.train_ids[0], plan.test_ids[0]);
}

TEST(Split, SameSeedSamePlan) {
  const auto ds = ten_identities();
  EXPECT_EQ(make_split(ds, 42, 0.5), make_split(ds, 42, 0.5));
}

TEST(Split, MatchesReferenceShuffle) {
  // Frozen from tests/oracles/split_oracle.py.
  const auto ds = ten_identities();
  const auto plan = make_split(ds, 7, 0.5);
  EXPECT_EQ(plan.train_ids, (std::vector<std::string>{"id0", "id3", "id4", "id7", "id9"}));
  EXPECT_EQ(plan.test_ids, (std::vector<std::string>{"id1", "id2", "id5", "id6", "id8"}));
  const auto plan30 = make_split(ds, 8, 0.3);
  EXPECT_EQ(plan30.train_ids, (std::vector<std::string>{"id3", "id4", "id6"}));
}

TEST(Split, DisjointAndComplete) {
  const auto ds = ten_identities();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto plan = make_split(ds, seed, 0.5);
    std::set<std::string> all(plan.train_ids.begin(), plan.train_ids.end());
    for (const auto& id : plan.test_ids) EXPECT_TRUE(all.insert(id).second);
    EXPECT_EQ(all.size(), 10u);
    EXPECT_TRUE(std::is_sorted(plan.train_ids.begin(), plan.train_ids.end()));
  }
}

TEST(Split, IncompleteIdentityExcludedWithWarning) {
  const auto ds = make_dataset(Eigen::MatrixXd::Random(5, 2), {"a", "a", "b", "b", "c"}, {0, 1, 0, 1, 0});
  SilenceWarnings silence;
  const auto plan = make_split(ds, 0, 0.5);
  EXPECT_EQ(plan.excluded_ids, std::vector<std::string>{"c"});
  EXPECT_FALSE(silence.seen.empty());
  SplitOptions strict;
  strict.exclude_incomplete = false;
  EXPECT_THROW(make_split(ds, 0, strict), InputError);
}

TEST(Split, NeedsTwoIdentities) {
  const auto ds = make_dataset(Eigen::MatrixXd::Random(2, 2), {"a", "a"}, {0, 1});
  EXPECT_THROW(make_split(ds, 0, 0.5), InputError);
  EXPECT_THROW(make_split(ten_identities(), 0, 1.0), InputError);
}

TEST(Split, DistractorsOnlyInGallery) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 2);
  std::vector<std::string> ids{"a", "a", "b", "b", "c", "c", "d", "d", std::string(kDistractorIdentity),
                               std::string(kDistractorIdentity)};
  const auto ds = make_dataset(x, ids, {0, 1, 0, 1, 0, 1, 0, 1, 1, 1});
  const auto plan = make_split(ds, 1, 0.5);
  for (auto r : training_rows(ds, plan)) EXPECT_FALSE(ds.is_distractor(r));
  const auto pg = test_rows(ds, plan);
  EXPECT_EQ(pg.probes.size(), 2u);
  EXPECT_EQ(pg.gallery.size(), 4u);
  for (auto r : pg.probes) EXPECT_FALSE(ds.is_distractor(r));
}

TEST(Digest, StableAndSensitive) {
  Fnv1a a, b;
  a.update("abc").update(1.5);
  b.update("abc").update(1.5);
  EXPECT_EQ(a.hex(), b.hex());
  EXPECT_EQ(a.hex().size(), 16u);
  b.update("x");
  EXPECT_NE(a.hex(), b.hex());
  EXPECT_EQ(Fnv1a{}.update("a").value(), 0xaf63dc4c8601ec8cULL);
}

TEST(Digest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123, 0.0}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_THROW(parse_double("1.0x"), InputError);
}
