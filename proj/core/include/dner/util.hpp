#ifndef DNER_UTIL_HPP
#define DNER_UTIL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dner {

// FNV-1a, used for feature interning. Must stay stable across platforms
// so serialized models are byte-identical.
constexpr std::uint64_t fnv1a64(const char* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded RNG with explicit draw mappings. std::mt19937_64 output is fully
// specified; the distribution adapters in <random> are not, so we map draws
// ourselves to keep files and models reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform real in [0, 1).
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// Percentage with one decimal, truncated (not rounded). Matches the
// convention used by the statistics report.
std::string trunc_pct(double numerator, double denominator);

std::string to_lower(const std::string& s);

// Character-class pattern with runs collapsed: "McGill" -> "Xx", "B12" -> "Xd".
std::string word_shape(const std::string& s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

bool is_valid_utf8(const std::string& bytes);

}  // namespace dner

#endif
