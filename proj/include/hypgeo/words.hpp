#pragma once

// Cyclic words over generator letters: lowercase is a generator, uppercase
// its inverse. Letters are ordered a < A < b < B < c < ...

#include <string>
#include <string_view>

namespace hypgeo {

char invert_letter(char c);
std::string inverse_word(std::string_view w);
/// Cancels adjacent inverse pairs.
std::string free_reduce(std::string_view w);
/// Free reduction followed by cancellation across the wrap-around.
std::string cyclic_reduce(std::string_view w);
bool is_cyclically_reduced(std::string_view w);
/// True when w is not a proper power of a shorter word.
bool is_primitive_word(std::string_view w);
/// Lexicographically least rotation of w or of its inverse.
std::string canonical_form(std::string_view w);

/// Canonical representative of an unoriented free-homotopy class.
class CyclicWord {
 public:
  CyclicWord() = default;
  /// Throws std::invalid_argument when w is empty or not cyclically reduced.
  explicit CyclicWord(std::string_view w);

  const std::string& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_primitive() const { return is_primitive_word(letters_); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend bool operator<(const CyclicWord& a, const CyclicWord& b);

 private:
  std::string letters_;
};

/// Order used for canonical forms.
bool word_less(std::string_view a, std::string_view b);

}  // namespace hypgeo
