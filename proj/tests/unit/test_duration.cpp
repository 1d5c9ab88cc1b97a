#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "spoofkit/audio/wav.hpp"
#include "spoofkit/duration/manifest.hpp"
#include "spoofkit/duration/padding.hpp"
#include "spoofkit/duration/stats.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/rng.hpp"

using namespace spoofkit;

namespace {
Waveform ramp(std::size_t n, int sr = 16000) {
  Waveform w;
  w.sample_rate = sr;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(static_cast<double>(i));
  return w;
}
}  // namespace

TEST_CASE("pad_or_truncate: truncation keeps the head") {
  const auto x = ramp(5 * 16000);
  const auto y = pad_or_truncate(x, 4.0);
  REQUIRE(y.size() == 64000);
  CHECK(std::equal(y.samples.begin(), y.samples.end(), x.samples.begin()));
}

TEST_CASE("pad_or_truncate: repeat padding tiles the whole waveform") {
  const auto two = ramp(2 * 16000);
  const auto y = pad_or_truncate(two, 4.0);
  REQUIRE(y.size() == 64000);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.samples[i] == two.samples[i % 32000]);

  const auto three = ramp(3 * 16000);
  const auto z = pad_or_truncate(three, 4.0);
  REQUIRE(z.size() == 64000);
  CHECK(std::equal(three.samples.begin(), three.samples.end(), z.samples.begin()));
  CHECK(std::equal(z.samples.begin() + 48000, z.samples.end(), three.samples.begin()));
}

TEST_CASE("pad_or_truncate: k-fold tiling identity and exact length") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5000);
    const double target = rng.uniform(0.001, 1.0);
    const auto y = pad_or_truncate(ramp(n), target);
    CHECK(y.size() == static_cast<std::size_t>(std::llround(target * 16000)));
  }
  const auto x = ramp(1600);
  const auto y = pad_or_truncate(x, 0.3);  // 3 x 0.1 s
  REQUIRE(y.size() == 4800);
  for (int k = 0; k < 3; ++k)
    CHECK(std::equal(x.samples.begin(), x.samples.end(), y.samples.begin() + k * 1600));
}

TEST_CASE("pad_or_truncate errors") {
  CHECK_THROWS_AS(pad_or_truncate(Waveform{}, 4.0), InvalidParameter);
  CHECK_THROWS_AS(pad_or_truncate(ramp(10), 0.0), InvalidParameter);
  CHECK_THROWS_AS(pad_or_truncate(ramp(10), -1.0), InvalidParameter);
}

namespace {
FeatureSequence seq(const std::string& id, std::size_t L, std::size_t D, double base) {
  FeatureSequence s{id, D, {}};
  for (std::size_t i = 0; i < L * D; ++i) s.frames.push_back(base + static_cast<double>(i) + 1.0);
  return s;
}
}  // namespace

TEST_CASE("batch_pad: single sequence, mixed lengths, round trip") {
  const auto a = seq("a", 4, 3, 0);
  const auto one = batch_pad({a});
  CHECK(one.batch == 1);
  CHECK(one.max_length == 4);
  CHECK(one.lengths == std::vector<std::size_t>{4});
  CHECK(one.data == a.frames);

  const auto p = batch_pad({seq("x", 3, 2, 0), seq("y", 5, 2, 100)});
  CHECK(p.max_length == 5);
  CHECK(p.lengths == std::vector<std::size_t>{3, 5});
  double pad_sum = 0;
  for (std::size_t l = 3; l < 5; ++l)
    for (std::size_t d = 0; d < 2; ++d) pad_sum += std::abs(p.at(0, l, d));
  CHECK(pad_sum == 0.0);

  Rng rng(8);
  std::vector<FeatureSequence> seqs;
  for (int i = 0; i < 7; ++i) seqs.push_back(seq("s" + std::to_string(i), 1 + rng.below(9), 4, rng.uniform(-5, 5)));
  const auto back = batch_unpad(batch_pad(seqs));
  REQUIRE(back.size() == seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    CHECK(back[i].dim == 4);
    CHECK(back[i].frames == seqs[i].frames);
  }
}

TEST_CASE("batch_pad rejects mixed dims and empty batches") {
  CHECK_THROWS_AS(batch_pad({seq("a", 2, 3, 0), seq("b", 2, 4, 0)}), ShapeError);
  CHECK_THROWS_AS(batch_pad({}), ShapeError);
  CHECK_THROWS_AS(batch_pad({FeatureSequence{"z", 3, {}}}), ShapeError);
}

TEST_CASE("duration_stats examples") {
  const auto s = duration_stats(std::vector<double>{1, 2, 3});
  CHECK(s.min_s == 1);
  CHECK(s.mean_s == 2);
  CHECK(s.max_s == 3);
  CHECK(s.histogram.counts == std::vector<std::size_t>{1, 1, 1});

  const auto one = duration_stats(std::vector<double>{7.25});
  CHECK(one.min_s == 7.25);
  CHECK(one.mean_s == 7.25);
  CHECK(one.max_s == 7.25);
  CHECK(one.histogram.counts.size() == 1);
  CHECK(one.histogram.bin_start_s == std::vector<double>{7.0});

  const auto h = duration_stats(std::vector<double>{0.2, 0.7, 1.1, 3.9}, 0.5).histogram;
  CHECK(h.bin_start_s == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5});
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 1, 0, 0, 0, 0, 1});
  std::ostringstream csv;
  h.write_csv(csv);
  CHECK(csv.str().rfind("bin_start_s,count\n0,1\n0.5,1\n", 0) == 0);

  CHECK_THROWS_AS(duration_stats(std::vector<double>{}), InvalidParameter);
  CHECK_THROWS_AS(duration_stats(Manifest{}), InvalidParameter);
}

TEST_CASE("duration fixture manifest") {
  const Manifest m = Manifest::load(SPOOFKIT_TEST_DATA "/duration_fixture.tsv");
  REQUIRE(m.records.size() == 3);
  CHECK(m.records[1].label == Label::kSpoof);
  const auto s = duration_stats(m);
  CHECK(s.min_s == 2.61);
  CHECK(s.mean_s == doctest::Approx(14.48).epsilon(1e-12));
  CHECK(s.max_s == 28.91);
  CHECK(s.histogram.counts.size() == 27);
}

TEST_CASE("manifest load/save, validation and WAV-header durations") {
  testing_util::TempDir tmp("manifest");
  std::filesystem::create_directories(tmp / "wav");
  Waveform a;
  a.samples.assign(16000, 0.1);
  write_wav(tmp / "wav/a.wav", a);
  Waveform b;
  b.samples.assign(8000, 0.1);
  write_wav(tmp / "wav/b.wav", b);
  testing_util::spit(tmp / "m.tsv",
                     "# comment\nA\twav/a.wav\tbonafide\nB\twav/b.wav\tspoof\t0.8\n\nC\twav/a.wav\tunknown\t1.0\n");
  Manifest m = Manifest::load(tmp / "m.tsv");
  REQUIRE(m.records.size() == 3);
  CHECK(m.records[0].path == tmp / "wav/a.wav");
  CHECK(!m.records[0].duration_s);
  resolve_durations(m);
  CHECK(*m.records[0].duration_s == 1.0);
  CHECK(*m.records[1].duration_s == 0.5);  // header wins over the stale 0.8
  CHECK(*m.records[2].duration_s == 1.0);
  const auto s = duration_stats(m);
  CHECK(s.mean_s == doctest::Approx(2.5 / 3));

  m.save(tmp / "out.tsv");
  const Manifest back = Manifest::load(tmp / "out.tsv");
  REQUIRE(back.records.size() == 3);
  CHECK(back.records[1].path == m.records[1].path);
  CHECK(back.records[1].label == Label::kSpoof);
  CHECK(*back.records[1].duration_s == 0.5);
  CHECK(testing_util::slurp(tmp / "out.tsv").find("wav/b.wav") != std::string::npos);

  testing_util::spit(tmp / "dup.tsv", "A\ta.wav\tspoof\nA\tb.wav\tspoof\n");
  CHECK_THROWS_AS(Manifest::load(tmp / "dup.tsv").validate(), FormatError);
  testing_util::spit(tmp / "cols.tsv", "A\ta.wav\n");
  CHECK_THROWS_AS(Manifest::load(tmp / "cols.tsv"), FormatError);
  testing_util::spit(tmp / "lab.tsv", "A\ta.wav\tfake\n");
  CHECK_THROWS_AS(Manifest::load(tmp / "lab.tsv"), FormatError);
  testing_util::spit(tmp / "neg.tsv", "A\ta.wav\tspoof\t-1\n");
  CHECK_THROWS(Manifest::load(tmp / "neg.tsv").validate());
}
