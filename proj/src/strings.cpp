#include "subreg/strings.hpp"

#include <algorithm>
#include <sstream>

namespace subreg {

Alphabet::Alphabet(std::vector<std::string> symbols, std::string boundary)
    : symbols_(std::move(symbols)), boundary_token_(std::move(boundary)) {
  if (symbols_.empty()) throw ConfigError("alphabet needs at least one symbol");
  if (boundary_token_.empty()) throw ConfigError("boundary token must be nonempty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const std::string& t = symbols_[i];
    if (t.empty()) throw ConfigError("empty symbol token");
    if (t == boundary_token_) throw ConfigError("symbol collides with boundary token: " + t);
    if (!index_.emplace(t, static_cast<Sym>(i)).second)
      throw ConfigError("duplicate symbol token: " + t);
    if (t.size() != 1) single_char_ = false;
  }
  if (boundary_token_.size() != 1) single_char_ = false;
}

bool Alphabet::valid_plain(const Str& s) const {
  return std::all_of(s.begin(), s.end(),
                     [&](Sym c) { return c >= 0 && c < boundary(); });
}

bool Alphabet::valid_padded(const Str& s) const {
  return std::all_of(s.begin(), s.end(), [&](Sym c) { return valid(c); });
}

const std::string& Alphabet::token(Sym s) const {
  if (!valid(s)) throw ConfigError("symbol id out of range: " + std::to_string(s));
  return is_boundary(s) ? boundary_token_ : symbols_[static_cast<std::size_t>(s)];
}

Sym Alphabet::sym(const std::string& token) const {
  if (token == boundary_token_) return boundary();
  auto it = index_.find(token);
  if (it == index_.end()) throw ConfigError("unknown symbol token: " + token);
  return it->second;
}

bool Alphabet::has(const std::string& token) const {
  return token == boundary_token_ || index_.count(token) > 0;
}

Str Alphabet::parse(const std::string& text) const {
  Str out;
  if (single_char_) {
    out.reserve(text.size());
    for (char c : text) out.push_back(sym(std::string(1, c)));
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(sym(tok));
  return out;
}

std::string Alphabet::format(const Str& s) const {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!single_char_ && i > 0) out += ' ';
    out += token(s[i]);
  }
  return out;
}

bool Alphabet::operator==(const Alphabet& other) const {
  return symbols_ == other.symbols_ && boundary_token_ == other.boundary_token_;
}

Tier::Tier(const Alphabet& a, const std::vector<std::string>& member_tokens) {
  mask_.assign(a.size(), 0);
  for (const std::string& t : member_tokens) {
    Sym s = a.sym(t);
    if (a.is_boundary(s)) throw ConfigError("boundary symbol cannot be a tier member");
    mask_[static_cast<std::size_t>(s)] = 1;
  }
}

std::vector<Sym> Tier::members() const {
  std::vector<Sym> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(static_cast<Sym>(i));
  return out;
}

std::size_t Tier::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

Str pad(const Str& x, int k, Sym boundary) {
  if (k < 0) throw ConfigError("pad width must be nonnegative");
  for (Sym c : x)
    if (c == boundary) throw ConfigError("input string already contains the boundary symbol");
  Str out;
  out.reserve(x.size() + 2 * static_cast<std::size_t>(k));
  out.insert(out.end(), static_cast<std::size_t>(k), boundary);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), static_cast<std::size_t>(k), boundary);
  return out;
}

bool contains_substring(const Str& s, const Str& g) {
  if (g.empty()) throw ConfigError("substring probe must be nonempty");
  if (g.size() > s.size()) return false;
  return std::search(s.begin(), s.end(), g.begin(), g.end()) != s.end();
}

bool contains_subsequence(const Str& s, const Str& h) {
  if (h.empty()) throw ConfigError("subsequence probe must be nonempty");
  std::size_t j = 0;
  for (Sym c : s) {
    if (c == h[j] && ++j == h.size()) return true;
  }
  return false;
}

long count_occurrences(const Str& s, const Str& g) {
  if (g.empty()) throw ConfigError("count probe must be nonempty");
  if (g.size() > s.size()) return 0;
  long n = 0;
  for (std::size_t i = 0; i + g.size() <= s.size(); ++i)
    if (std::equal(g.begin(), g.end(), s.begin() + static_cast<long>(i))) ++n;
  return n;
}

Str project_tier(const Str& s, const Tier& t, Sym boundary) {
  Str out;
  out.reserve(s.size());
  for (Sym c : s)
    if (c == boundary || t.contains(c)) out.push_back(c);
  return out;
}

Str prefix(const Str& s, std::size_t n) {
  if (n > s.size()) throw DimensionError("prefix length exceeds string length");
  return Str(s.begin(), s.begin() + static_cast<long>(n));
}

Str suffix(const Str& s, std::size_t n) {
  if (n > s.size()) throw DimensionError("suffix length exceeds string length");
  return Str(s.end() - static_cast<long>(n), s.end());
}

}  // namespace subreg
