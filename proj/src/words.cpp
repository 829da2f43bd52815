#include "hypgeo/words.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace hypgeo {

namespace {

int rank(char c) {
  const auto u = static_cast<unsigned char>(c);
  return 2 * (std::tolower(u) - 'a') + (std::isupper(u) ? 1 : 0);
}

// Start index of the least rotation (two-pointer minimum expression).
std::size_t least_rotation(const std::vector<int>& s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const int a = s[(i + k) % n];
    const int b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

std::string rotate_from(std::string_view w, std::size_t start) {
  std::string out;
  out.reserve(w.size());
  out.append(w.substr(start));
  out.append(w.substr(0, start));
  return out;
}

std::string least(std::string_view w) {
  std::vector<int> r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = rank(w[i]);
  return rotate_from(w, least_rotation(r));
}

}  // namespace

char invert_letter(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::islower(u) ? static_cast<char>(std::toupper(u)) : static_cast<char>(std::tolower(u));
}

std::string inverse_word(std::string_view w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = invert_letter(c);
  return out;
}

std::string free_reduce(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == invert_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string cyclic_reduce(std::string_view w) {
  std::string r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && r[lo] == invert_letter(r[hi - 1])) {
    ++lo;
    --hi;
  }
  return r.substr(lo, hi - lo);
}

bool is_cyclically_reduced(std::string_view w) {
  if (w.empty()) return true;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] == invert_letter(w[i])) return false;
  }
  return w.size() == 1 || w.front() != invert_letter(w.back());
}

bool is_primitive_word(std::string_view w) {
  const std::size_t n = w.size();
  if (n == 0) return false;
  // Smallest period via the prefix function.
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  const std::size_t period = n - pi[n - 1];
  return period == n || n % period != 0;
}

bool word_less(std::string_view a, std::string_view b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int ra = rank(a[i]);
    const int rb = rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  return a.size() < b.size();
}

std::string canonical_form(std::string_view w) {
  std::string fwd = least(w);
  std::string bwd = least(inverse_word(w));
  return word_less(bwd, fwd) ? bwd : fwd;
}

CyclicWord::CyclicWord(std::string_view w) {
  if (w.empty()) throw std::invalid_argument("CyclicWord: empty word");
  if (!is_cyclically_reduced(w)) {
    throw std::invalid_argument("CyclicWord: '" + std::string(w) + "' is not cyclically reduced");
  }
  letters_ = canonical_form(w);
}

bool operator<(const CyclicWord& a, const CyclicWord& b) { return word_less(a.letters(), b.letters()); }

}  // namespace hypgeo
