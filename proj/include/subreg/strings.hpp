#pragma once

// Alphabets, boundary padding, and the primitive string observations
// (substring / subsequence / occurrence count / tier projection) that every
// predicate family is built from.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <unordered_map>
#include <vector>

#include "subreg/errors.hpp"

namespace subreg {

using Sym = std::int32_t;
using Str = std::vector<Sym>;

// Finite symbol inventory plus one reserved boundary symbol whose id is
// always symbols.size(). Symbol order is fixed at construction; predicate
// and feature indices depend on it, so it must not be re-sorted.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols, std::string boundary = "#");

  std::size_t size() const { return symbols_.size(); }
  Sym boundary() const { return static_cast<Sym>(symbols_.size()); }
  bool is_boundary(Sym s) const { return s == boundary(); }
  bool valid(Sym s) const { return s >= 0 && s <= boundary(); }
  bool valid_plain(const Str& s) const;  // true when every symbol exists and none is boundary
  bool valid_padded(const Str& s) const; // boundary allowed

  const std::string& token(Sym s) const;
  const std::string& boundary_token() const { return boundary_token_; }
  Sym sym(const std::string& token) const;  // throws ConfigError on unknown token
  bool has(const std::string& token) const;

  // Compact one-char-per-symbol rendering when possible, otherwise
  // space-separated tokens (used for affix sequences).
  bool single_char() const { return single_char_; }
  Str parse(const std::string& text) const;
  std::string format(const Str& s) const;

  const std::vector<std::string>& tokens() const { return symbols_; }
  bool operator==(const Alphabet& other) const;

 private:
  std::vector<std::string> symbols_;
  std::string boundary_token_ = "#";
  std::unordered_map<std::string, Sym> index_;
  bool single_char_ = true;
};

// Subset of an alphabet's plain symbols. Projection keeps boundary symbols.
class Tier {
 public:
  Tier() = default;
  Tier(const Alphabet& a, const std::vector<std::string>& member_tokens);

  bool contains(Sym s) const {
    return s >= 0 && static_cast<std::size_t>(s) < mask_.size() && mask_[s] != 0;
  }
  std::vector<Sym> members() const;  // ascending symbol ids
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool operator==(const Tier& other) const { return members() == other.members(); }

 private:
  std::vector<char> mask_;
};

// #^K x #^K. Rejects boundary symbols inside x and K < 0.
Str pad(const Str& x, int k, Sym boundary);

// Contiguous occurrence test. g must be nonempty; |g| > |s| just yields false.
bool contains_substring(const Str& s, const Str& g);

// Not-necessarily-contiguous, order-preserving occurrence test.
bool contains_subsequence(const Str& s, const Str& h);

// Number of (possibly overlapping) start positions of g in s.
long count_occurrences(const Str& s, const Str& g);

// Deletes symbols outside the tier; boundary symbols are always kept.
Str project_tier(const Str& s, const Tier& t, Sym boundary);

Str prefix(const Str& s, std::size_t n);  // rejects n > |s|
Str suffix(const Str& s, std::size_t n);

}  // namespace subreg
