#include <doctest.h>

#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypgeo/enumerator.hpp"
#include "hypgeo/errors.hpp"
#include "hypgeo/words.hpp"

using namespace hypgeo;
namespace fs = std::filesystem;

namespace {

using IntMatrix = std::array<long long, 4>;

IntMatrix mul(const IntMatrix& p, const IntMatrix& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]};
}

// Integer generators of the torus group and their inverses.
const std::map<char, IntMatrix> kLetters{
    {'a', {1, 1, 1, 2}}, {'A', {2, -1, -1, 1}}, {'b', {1, -1, -1, 2}}, {'B', {2, 1, 1, 1}}};

char flip(char c) { return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c)) : static_cast<char>(std::tolower(c)); }

std::string reverse_inverse(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = flip(c);
  return out;
}

// Conjugacy key of an unoriented cyclic word: the plain-ASCII least
// rotation of the word or its inverse.
std::string necklace_key(const std::string& w) {
  std::string best;
  for (const std::string& v : {w, reverse_inverse(w)}) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string r = v.substr(k) + v.substr(0, k);
      if (best.empty() || r < best) best = r;
    }
  }
  return best;
}

std::string primitive_root(const std::string& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    std::string rep;
    for (std::size_t k = 0; k < n / d; ++k) rep += w.substr(0, d);
    if (rep == w) return w.substr(0, d);
  }
  return w;
}

bool adjacent_inverse(char x, char y) { return x != y && std::tolower(x) == std::tolower(y); }

// All reduced words up to max_len, in integer arithmetic: classes with
// 2 < |trace| <= 2 cosh(T / 2).
std::set<std::string> brute_force_classes(double T, int max_len) {
  const double bound = 2.0 * std::cosh(T / 2.0);
  std::set<std::string> out;
  std::vector<std::pair<std::string, IntMatrix>> layer{{"", {1, 0, 0, 1}}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::pair<std::string, IntMatrix>> next;
    for (const auto& [w, m] : layer) {
      for (const auto& [c, g] : kLetters) {
        if (!w.empty() && adjacent_inverse(w.back(), c)) continue;
        next.push_back({w + c, mul(m, g)});
      }
    }
    for (const auto& [w, m] : next) {
      if (adjacent_inverse(w.front(), w.back())) continue;
      const long long tr = std::llabs(m[0] + m[3]);
      if (tr <= 2 || static_cast<double>(tr) > bound) continue;
      out.insert(necklace_key(primitive_root(w)));
    }
    layer = std::move(next);
  }
  return out;
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hypgeo_unit";
  fs::create_directories(dir);
  return dir / name;
}

CacheHeader header(double T) {
  CacheHeader h;
  h.version = cache_version;
  h.surface = "punctured_torus";
  h.profile = tolerance_profile();
  h.T = T;
  return h;
}

}  // namespace

TEST_CASE("word to matrix") {
  const SurfaceSpec t = build_punctured_torus();
  CHECK(approx_equal(word_to_matrix("a", t), MoebiusMap(1, 1, 1, 2), 1e-15));
  const MoebiusMap c = word_to_matrix("abAB", t);
  CHECK(classify(c) == MapKind::parabolic);
  const IntMatrix oracle = mul(mul(kLetters.at('a'), kLetters.at('b')), mul(kLetters.at('A'), kLetters.at('B')));
  CHECK(std::abs(c.trace()) == doctest::Approx(static_cast<double>(std::llabs(oracle[0] + oracle[3]))));
  CHECK_THROWS_AS(CyclicWord("aA"), std::invalid_argument);
}

TEST_CASE("small cutoffs") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 2.0);
  std::set<std::string> words;
  for (const auto& c : classes) words.insert(c.word.letters());
  CHECK(words.count("a"));
  CHECK(words.count("b"));
  CHECK_FALSE(words.count("abAB"));
  for (const auto& c : classes) CHECK(c.length == doctest::Approx(1.9248473).epsilon(1e-7));
  CHECK(enumerate_classes(t, 1.0).empty());
}

TEST_CASE("completeness at T = 3") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 3.0);
  std::set<std::string> got;
  for (const auto& c : classes) got.insert(necklace_key(c.word.letters()));
  CHECK(got.size() == classes.size());
  CHECK(got == brute_force_classes(3.0, 12));
}

TEST_CASE("class invariants") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 7.0);
  REQUIRE(classes.size() > 50);
  for (const auto& c : classes) {
    const std::string& w = c.word.letters();
    CHECK(is_cyclically_reduced(w));
    CHECK(canonical_form(w) == w);
    CHECK(canonical_form(inverse_word(w)) == w);
    CHECK(is_primitive_word(w));
    CHECK(classify(c.matrix) == MapKind::hyperbolic);
    CHECK(std::abs(translation_length(c.matrix) - c.length) < 1e-9);
    const double tr = std::abs(word_to_matrix(w, t).trace());
    const std::string rot = w.substr(1) + w.front();
    CHECK(std::abs(std::abs(word_to_matrix(rot, t).trace()) - tr) < 1e-9 * tr);
    CHECK(std::abs(std::abs(word_to_matrix(inverse_word(w), t).trace()) - tr) < 1e-9 * tr);
    CHECK(c.length <= 7.0);
  }
}

TEST_CASE("count length with powers") {
  ClosedGeodesicClass one;
  one.length = 1.9;
  one.max_power = max_power(1.9, 2.0);
  CHECK(count_length({one}) == doctest::Approx(1.9));
  ClosedGeodesicClass two;
  two.length = 0.9;
  two.max_power = max_power(0.9, 2.0);
  CHECK(two.max_power == 2);
  CHECK(count_length({two}) == doctest::Approx(2.7));
  CHECK(two.power_weight() == 3);

  const SurfaceSpec t = build_punctured_torus();
  const auto with = enumerate_classes(t, 5.0);
  EnumerateOptions opt;
  opt.include_powers = false;
  const auto without = enumerate_classes(t, 5.0, opt);
  CHECK(with.size() == without.size());
  CHECK(count_length(with) > count_length(without));
}

TEST_CASE("orbit counts") {
  const SurfaceSpec t = build_punctured_torus();
  const HPoint z0 = t.base_point;
  CHECK(orbit_count(z0, 0.0, t) == 1);
  std::vector<double> xs, ys;
  std::size_t prev = 0;
  for (double T = 6.0; T <= 10.0; T += 1.0) {
    const std::size_t n = orbit_count(z0, T, t);
    CHECK(n >= prev);
    prev = n;
    xs.push_back(T);
    ys.push_back(std::log(static_cast<double>(n)));
  }
  const double mx = (xs.front() + xs.back()) / 2.0;
  double my = 0.0;
  for (double y : ys) my += y / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.1);
}

TEST_CASE("octagon systoles") {
  const SurfaceSpec o = build_genus2_octagon();
  CHECK(enumerate_classes(o, 3.0).empty());
  const auto classes = enumerate_classes(o, 3.5);
  // Twelve systoles of length 2 arccosh(1 + sqrt 2) on the regular octagon surface.
  CHECK(classes.size() == 12);
  for (const auto& c : classes) CHECK(c.length == doctest::Approx(2.0 * std::acosh(1.0 + std::sqrt(2.0))).epsilon(1e-10));
}

TEST_CASE("cache round trip") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 5.0);
  const fs::path path = temp_file("classes_T5.txt");
  cache_save(classes, header(5.0), path);
  const auto back = cache_load(path, header(5.0));
  REQUIRE(back.size() == classes.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].word == classes[k].word);
    CHECK(back[k].length == classes[k].length);
    CHECK(back[k].max_power == classes[k].max_power);
    CHECK(approx_equal(back[k].matrix, classes[k].matrix, 0.0));
  }

  CHECK_THROWS_AS(cache_load(path, header(6.0)), CacheError);
  CacheHeader other = header(5.0);
  other.surface = "genus2_octagon";
  CHECK_THROWS_AS(cache_load(path, other), CacheError);

  std::string text;
  {
    std::ifstream is(path);
    text.assign(std::istreambuf_iterator<char>(is), {});
  }
  const fs::path cut = temp_file("classes_cut.txt");
  {
    std::ofstream os(cut);
    os << text.substr(0, text.size() * 2 / 3);
  }
  CHECK_THROWS_AS(cache_load(cut, header(5.0)), CacheError);
  CHECK_THROWS_AS(cache_load(temp_file("absent.txt"), header(5.0)), MissingArtifactError);
}
