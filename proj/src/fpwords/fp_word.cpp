#include "branchforge/fp_word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "branchforge/error.hpp"

namespace branchforge {

std::string LenPair::to_string() const {
  return "(" + std::to_string(b) + "," + std::to_string(a) + ")";
}

namespace {

bool is_a(const Letter& l) { return std::holds_alternative<Permutation>(l); }

bool letter_is_identity(const Letter& l) {
  if (const auto* p = std::get_if<Permutation>(&l)) return p->is_identity();
  return std::get<BLetter>(l).is_identity();
}

Letter letter_inverse(const Letter& l) {
  if (const auto* p = std::get_if<Permutation>(&l)) return p->inverse();
  return std::get<BLetter>(l).inverse();
}

}  // namespace

FPWord normal_form(int level, std::size_t alt_degree, std::vector<Letter> raw) {
  FPWord w(level, alt_degree);
  auto& out = w.letters_;
  for (auto& letter : raw) {
    if (const auto* p = std::get_if<Permutation>(&letter))
      if (p->degree() != alt_degree)
        throw DomainError("A-letter " + p->to_string() + " has degree " +
                          std::to_string(p->degree()) + ", level " + std::to_string(level) +
                          " needs " + std::to_string(alt_degree));
    if (const auto* p = std::get_if<Permutation>(&letter))
      if (!p->is_even()) throw DomainError("A-letter " + p->to_string() + " is odd");
    if (const auto* b = std::get_if<BLetter>(&letter))
      if (b->q.degree() != 5) throw DomainError("Q parts are permutations of 5 points");
    if (letter_is_identity(letter)) continue;
    if (!out.empty() && is_a(out.back()) == is_a(letter)) {
      if (is_a(letter))
        out.back() = compose(std::get<Permutation>(out.back()), std::get<Permutation>(letter));
      else
        out.back() = std::get<BLetter>(out.back()) * std::get<BLetter>(letter);
      if (letter_is_identity(out.back())) out.pop_back();
    } else {
      out.push_back(std::move(letter));
    }
  }
  return w;
}

LenPair FPWord::length() const {
  LenPair len;
  for (const auto& l : letters_) (is_a(l) ? len.a : len.b) += 1;
  return len;
}

FPWord FPWord::inverse() const {
  std::vector<Letter> raw;
  raw.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) raw.push_back(letter_inverse(*it));
  return normal_form(level_, degree_, std::move(raw));
}

FPWord FPWord::power(long long k) const {
  const FPWord base = k < 0 ? inverse() : *this;
  unsigned long long e = k < 0 ? 0ull - static_cast<unsigned long long>(k)
                               : static_cast<unsigned long long>(k);
  FPWord result(level_, degree_);
  FPWord square = base;
  while (e > 0) {
    if (e & 1u) result = result * square;
    e >>= 1u;
    if (e) square = square * square;
  }
  return result;
}

FPWord operator*(const FPWord& u, const FPWord& v) {
  if (u.level_ != v.level_ || u.degree_ != v.degree_)
    throw DomainError("multiplying words of different levels");
  std::vector<Letter> raw = u.letters_;
  raw.insert(raw.end(), v.letters_.begin(), v.letters_.end());
  return normal_form(u.level_, u.degree_, std::move(raw));
}

bool FPWord::only_g_letters() const {
  return std::all_of(letters_.begin(), letters_.end(), [](const Letter& l) {
    return !is_a(l) && std::get<BLetter>(l).q.is_identity();
  });
}

std::string render_g_word(const GWord& g, const std::vector<std::string>& g_names) {
  if (g.empty()) return "1";
  std::string out;
  for (int l : g.letters()) {
    const auto k = static_cast<std::size_t>(std::abs(l) - 1);
    if (k >= g_names.size()) throw DomainError("G-word uses an unknown generator");
    if (!out.empty()) out += ' ';
    out += g_names[k];
    if (l < 0) out += "^-1";
  }
  return out;
}

std::string FPWord::to_dsl(const std::vector<std::string>& g_names) const {
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    if (const auto* p = std::get_if<Permutation>(&l)) {
      out += "A(" + p->to_string() + ")";
    } else {
      const auto& b = std::get<BLetter>(l);
      out += "B(q=" + b.q.to_string() + ", g=" + render_g_word(b.g, g_names) + ")";
    }
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------------------
// Section calculus

ConjugateForm conjugate_form(const FPWord& w) {
  ConjugateForm cf;
  Permutation acc(w.alt_degree());
  for (const auto& l : w.letters()) {
    if (const auto* p = std::get_if<Permutation>(&l)) {
      acc = compose(acc, *p);
    } else {
      cf.terms.emplace_back(acc, std::get<BLetter>(l));
      cf.prefix_inverses.push_back(acc.inverse());
    }
  }
  cf.a = acc;
  cf.a_inverse = acc.inverse();
  return cf;
}

Positions section_positions(const ConjugateForm& cf, const LevelData& level, Point x) {
  Positions out;
  const Point ax = level.act(cf.a, x);
  for (std::size_t i = 0; i < cf.terms.size(); ++i)
    out.emplace_back(i, level.act(cf.prefix_inverses[i], ax));
  return out;
}

Positions stabilized_positions(const ConjugateForm& cf, const LevelData& level, Point x) {
  Positions out;
  Point z = x;
  do {
    for (std::size_t i = 0; i < cf.terms.size(); ++i)
      out.emplace_back(i, level.act(cf.prefix_inverses[i], z));
    z = level.act(cf.a_inverse, z);
  } while (z != x);
  return out;
}

FPWord assemble_section(const ConjugateForm& cf, const Positions& positions, Point alpha,
                        Point beta, const LevelData& next) {
  std::vector<Letter> raw;
  for (const auto& [i, y] : positions) {
    const BLetter& b = cf.terms[i].second;
    if (y == 0)
      raw.emplace_back(b);
    else if (y == alpha)
      raw.emplace_back(next.q_natural(b.q));
    else if (y == beta)
      raw.emplace_back(next.g_natural(b.g));
  }
  return normal_form(next.index(), next.alt_degree(), std::move(raw));
}

namespace {

std::pair<Point, Point> spine_at(const SpinePair& spine, int level) {
  const auto k = static_cast<std::size_t>(level - 1);
  if (level < 1 || k >= spine.alpha.size() || k >= spine.beta.size())
    throw ConfigError("spine has no entry for level " + std::to_string(level));
  return {spine.alpha[k], spine.beta[k]};
}

void check_letter(const LevelData& level, Point x) {
  if (x >= level.x_size())
    throw DomainError("letter " + std::to_string(x) + " outside X_" +
                      std::to_string(level.index()));
}

}  // namespace

FPWord section_word(const FPWord& w, Point x, const TreeShape& shape, const SpinePair& spine) {
  const LevelData& level = shape.level(w.level());
  const LevelData& next = shape.level(w.level() + 1);
  check_letter(level, x);
  const auto [alpha, beta] = spine_at(spine, w.level());
  const auto cf = conjugate_form(w);
  return assemble_section(cf, section_positions(cf, level, x), alpha, beta, next);
}

FPWord stabilized_section_word(const FPWord& w, const Vertex& u, const TreeShape& shape,
                               const SpinePair& spine) {
  FPWord cur = w;
  for (Point x : u) {
    const LevelData& level = shape.level(cur.level());
    const LevelData& next = shape.level(cur.level() + 1);
    check_letter(level, x);
    const auto [alpha, beta] = spine_at(spine, cur.level());
    const auto cf = conjugate_form(cur);
    cur = assemble_section(cf, stabilized_positions(cf, level, x), alpha, beta, next);
  }
  return cur;
}

TreeAut evaluate(const FPWord& w, TreeContext& ctx) {
  if (ctx.shape().level(w.level()).alt_degree() != w.alt_degree())
    throw DomainError("word degree does not match level " + std::to_string(w.level()));
  TreeAut result = ctx.identity(w.level());
  for (const auto& l : w.letters()) {
    if (const auto* p = std::get_if<Permutation>(&l)) {
      result = ctx.compose(result, ctx.rooted(*p, w.level()));
    } else {
      const auto& b = std::get<BLetter>(l);
      result = ctx.compose(result, ctx.directed_q(b.q, w.level()));
      result = ctx.compose(result, ctx.directed_g(b.g, w.level()));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// DSL

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long long parse_exponent(std::string_view text, std::size_t& i) {
  if (i >= text.size() || text[i] != '^') return 1;
  ++i;
  std::size_t start = i;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  long long k = 0;
  const char* first = text.data() + start + (text[start] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(first, text.data() + i, k);
  if (ec != std::errc() || ptr != text.data() + i)
    throw DomainError("malformed exponent in \"" + std::string(text) + "\"");
  return k;
}

template <class T, class Inv>
void push_power(std::vector<T>& out, const T& x, long long k, Inv inv) {
  const T y = k < 0 ? inv(x) : x;
  for (long long n = 0; n < (k < 0 ? -k : k); ++n) out.push_back(y);
}

}  // namespace

GWord parse_g_word(std::string_view text, const std::vector<std::string>& g_names) {
  text = trim(text);
  if (text.empty()) throw DomainError("empty G-word (write 1 for the identity)");
  if (text == "1") return GWord();
  std::vector<int> letters;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '^')
      ++i;
    const std::string name(text.substr(start, i - start));
    const long long k = parse_exponent(text, i);
    if (name == "1") continue;
    auto it = std::find(g_names.begin(), g_names.end(), name);
    if (it == g_names.end()) throw DomainError("unknown G generator '" + name + "'");
    const int letter = static_cast<int>(it - g_names.begin()) + 1;
    push_power(letters, letter, k, [](int l) { return -l; });
  }
  return GWord(std::move(letters));
}

FPWord parse_word(std::string_view text, int level, std::size_t alt_degree,
                  const std::vector<std::string>& g_names) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  text = trim(text);
  if (text == "1" || text.empty()) return FPWord(level, alt_degree);
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    const char kind = text[i];
    if ((kind != 'A' && kind != 'B') || i + 1 >= text.size() || text[i + 1] != '(')
      throw DomainError("expected A(...) or B(...) at offset " + std::to_string(i));
    std::size_t depth = 0, j = i + 1;
    for (; j < text.size(); ++j) {
      if (text[j] == '(') ++depth;
      if (text[j] == ')' && --depth == 0) break;
    }
    if (j >= text.size()) throw DomainError("unbalanced parentheses in word");
    const std::string_view body = trim(text.substr(i + 2, j - i - 2));
    i = j + 1;
    const long long k = parse_exponent(text, i);
    if (kind == 'A') {
      // A(1 2 3) is accepted as shorthand for A((1 2 3))
      const Permutation a = body.empty() || body == "1" ? Permutation(alt_degree)
                            : body.front() == '('
                                ? Permutation::parse(body, alt_degree)
                                : Permutation::parse("(" + std::string(body) + ")", alt_degree);
      push_power<Letter>(raw, a, k, letter_inverse);
    } else {
      BLetter b;
      std::size_t start = 0, d = 0;
      std::vector<std::string_view> parts;
      for (std::size_t p = 0; p <= body.size(); ++p) {
        if (p == body.size() || (body[p] == ',' && d == 0)) {
          parts.push_back(trim(body.substr(start, p - start)));
          start = p + 1;
        } else if (body[p] == '(') {
          ++d;
        } else if (body[p] == ')') {
          --d;
        }
      }
      for (auto part : parts) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) throw DomainError("B-letter field without '='");
        const auto key = trim(part.substr(0, eq));
        const auto value = trim(part.substr(eq + 1));
        if (key == "q")
          b.q = value == "1" ? Permutation(5) : Permutation::parse(value, 5);
        else if (key == "g")
          b.g = parse_g_word(value, g_names);
        else
          throw DomainError("unknown B-letter field '" + std::string(key) + "'");
      }
      if (!b.q.is_even()) throw DomainError("Q part " + b.q.to_string() + " is odd");
      push_power<Letter>(raw, b, k, letter_inverse);
    }
  }
  return normal_form(level, alt_degree, std::move(raw));
}

FPWord parse_word(std::string_view text, int level, const TreeShape& shape,
                  const std::vector<std::string>& g_names) {
  return parse_word(text, level, shape.level(level).alt_degree(), g_names);
}

}  // namespace branchforge
