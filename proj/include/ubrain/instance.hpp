#pragma once

// Instances, literals, terms and DNF formulas with fuzzy (min/max) semantics,
// plus the plain-text formats for datasets and rendered formulas.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ubrain/error.hpp"

namespace ubrain {

/// Truth degree used for a missing bit.
inline constexpr double kMissing = 0.5;

enum class Label : std::uint8_t { positive, negative };

inline const char* to_string(Label label) { return label == Label::positive ? "positive" : "negative"; }

struct Instance {
  std::vector<double> values;
  Label label = Label::negative;
  std::string id;

  std::size_t arity() const noexcept { return values.size(); }

  bool crisp() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class Polarity : std::uint8_t { plain, negated };

/// A variable (1-based, as in "x36") or its negation.
struct Literal {
  std::uint32_t variable = 1;
  Polarity polarity = Polarity::plain;

  static constexpr Literal plain(std::uint32_t v) { return {v, Polarity::plain}; }
  static constexpr Literal negated(std::uint32_t v) { return {v, Polarity::negated}; }

  bool is_negated() const noexcept { return polarity == Polarity::negated; }
  Literal complement() const noexcept {
    return {variable, is_negated() ? Polarity::plain : Polarity::negated};
  }

  /// Dense index over the 2n candidate literals: x1, ~x1, x2, ~x2, ...
  /// Ascending index is also the tie-break order.
  std::size_t index() const noexcept {
    return 2 * (static_cast<std::size_t>(variable) - 1) + (is_negated() ? 1 : 0);
  }
  static Literal from_index(std::size_t index) {
    return {static_cast<std::uint32_t>(index / 2 + 1), index % 2 ? Polarity::negated : Polarity::plain};
  }

  friend auto operator<=>(const Literal& a, const Literal& b) { return a.index() <=> b.index(); }
  friend bool operator==(const Literal&, const Literal&) = default;
};

inline std::string to_string(Literal lit) {
  return (lit.is_negated() ? "~x" : "x") + std::to_string(lit.variable);
}

/// Conjunction of literals kept sorted by variable; the empty term is constant TRUE.
class Term {
 public:
  Term() = default;
  Term(std::initializer_list<Literal> literals) {
    for (auto lit : literals) add(lit);
  }

  /// Adds a literal; duplicates are ignored. Throws if the complement is already present.
  void add(Literal lit) {
    if (lit.variable == 0) throw Error(ErrorCode::range, "variable indices are 1-based");
    auto pos = std::lower_bound(literals_.begin(), literals_.end(), lit);
    if (pos != literals_.end() && *pos == lit) return;
    if (contains(lit.complement()))
      throw Error(ErrorCode::contradiction, "term already holds " + to_string(lit.complement()));
    literals_.insert(pos, lit);
  }

  bool contains(Literal lit) const {
    return std::binary_search(literals_.begin(), literals_.end(), lit);
  }

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  bool empty() const noexcept { return literals_.empty(); }

  std::uint32_t max_variable() const noexcept { return empty() ? 0 : literals_.back().variable; }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  std::vector<Literal> literals_;
};

/// Disjunction of terms in insertion order; the empty formula is constant FALSE.
class Formula {
 public:
  Formula() = default;
  Formula(std::initializer_list<Term> terms) : terms_(terms) {}

  void add(Term term) { terms_.push_back(std::move(term)); }

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  std::uint32_t max_variable() const noexcept {
    std::uint32_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.max_variable());
    return m;
  }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Fuzzy evaluation

inline double eval_literal(Literal lit, std::span<const double> x) {
  if (lit.variable == 0 || lit.variable > x.size())
    throw Error(ErrorCode::arity, "literal " + to_string(lit) + " outside instance arity " +
                                      std::to_string(x.size()));
  const double v = x[lit.variable - 1];
  return lit.is_negated() ? 1.0 - v : v;
}

inline double eval_term(const Term& term, std::span<const double> x) {
  double degree = 1.0;
  for (auto lit : term.literals()) degree = std::min(degree, eval_literal(lit, x));
  return degree;
}

inline double eval_formula(const Formula& f, std::span<const double> x) {
  double degree = 0.0;
  for (const auto& term : f.terms()) degree = std::max(degree, eval_term(term, x));
  return degree;
}

inline double eval_literal(Literal lit, const Instance& x) { return eval_literal(lit, x.values); }
inline double eval_term(const Term& t, const Instance& x) { return eval_term(t, x.values); }
inline double eval_formula(const Formula& f, const Instance& x) { return eval_formula(f, x.values); }

/// Positive iff the formula degree is strictly above 0.5.
inline Label classify(const Formula& f, std::span<const double> x) {
  return eval_formula(f, x) > 0.5 ? Label::positive : Label::negative;
}
inline Label classify(const Formula& f, const Instance& x) { return classify(f, x.values); }

// ---------------------------------------------------------------------------
// Text form: "x1~x2 + x3", "FALSE" for the empty formula, "TRUE" for an empty term.

inline std::string render_term(const Term& term) {
  if (term.empty()) return "TRUE";
  std::string out;
  for (auto lit : term.literals()) out += to_string(lit);
  return out;
}

inline std::string render_formula(const Formula& f) {
  if (f.empty()) return "FALSE";
  std::string out;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (t) out += " + ";
    out += render_term(f.terms()[t]);
  }
  return out;
}

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::optional<std::size_t> arity) : text_(text), arity_(arity) {}

  Formula parse() {
    skip_space();
    if (consume_word("FALSE")) {
      skip_space();
      expect_end();
      return {};
    }
    Formula f;
    f.add(parse_term());
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '+') {
      ++pos_;
      skip_space();
      f.add(parse_term());
      skip_space();
    }
    expect_end();
    return f;
  }

 private:
  Term parse_term() {
    if (consume_word("TRUE")) return {};
    Term term;
    if (!at_literal()) throw ParseError(pos_, "expected a literal");
    while (at_literal()) {
      const std::size_t start = pos_;
      const bool negated = text_[pos_] == '~';
      if (negated) ++pos_;
      if (pos_ >= text_.size() || text_[pos_] != 'x') throw ParseError(pos_, "expected 'x'");
      ++pos_;
      const std::size_t digits = pos_;
      std::uint64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (v > 0xffffffffULL) throw ParseError(digits, "variable index too large");
        ++pos_;
      }
      if (pos_ == digits) throw ParseError(pos_, "expected variable index");
      if (v == 0) throw Error(ErrorCode::range, "variable index 0 at offset " + std::to_string(start) +
                                                    " (indices are 1-based)");
      if (arity_ && v > *arity_)
        throw Error(ErrorCode::range, "variable x" + std::to_string(v) + " exceeds arity " +
                                          std::to_string(*arity_));
      const auto lit = negated ? Literal::negated(static_cast<std::uint32_t>(v))
                               : Literal::plain(static_cast<std::uint32_t>(v));
      try {
        term.add(lit);
      } catch (const Error& e) {
        throw ParseError(start, e.what());
      }
    }
    return term;
  }

  bool at_literal() const {
    return pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == '~');
  }

  bool consume_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect_end() const {
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  std::optional<std::size_t> arity_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the render grammar. When `arity` is given, variables above it are a range error.
inline Formula parse_formula(std::string_view text, std::optional<std::size_t> arity = std::nullopt) {
  return detail::FormulaParser(text, arity).parse();
}

// ---------------------------------------------------------------------------
// Dataset

class Dataset {
 public:
  explicit Dataset(std::size_t arity = 0) : arity_(arity) {}

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Instance>& positives() const noexcept { return positives_; }
  const std::vector<Instance>& negatives() const noexcept { return negatives_; }
  std::size_t size() const noexcept { return positives_.size() + negatives_.size(); }

  /// Validates arity and value range, then files the instance under its label.
  void add(Instance x) {
    if (x.arity() != arity_)
      throw Error(ErrorCode::arity, "instance '" + x.id + "' has " + std::to_string(x.arity()) +
                                        " values, dataset arity is " + std::to_string(arity_));
    for (double v : x.values)
      if (!(v >= 0.0 && v <= 1.0))
        throw Error(ErrorCode::range, "instance '" + x.id + "' holds a value outside [0,1]");
    (x.label == Label::positive ? positives_ : negatives_).push_back(std::move(x));
  }

  std::vector<Instance>& mutable_positives() noexcept { return positives_; }
  std::vector<Instance>& mutable_negatives() noexcept { return negatives_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t arity_;
  std::vector<Instance> positives_;
  std::vector<Instance> negatives_;
};

/// One instance per line: "+" or "-", then n tokens from {0, 1, ?}. Blank lines and
/// lines starting with '#' are skipped. Instance ids are "L<line>".
inline Dataset read_dataset(std::istream& in, const std::string& source = "<dataset>") {
  std::optional<Dataset> data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok) || tok[0] == '#') continue;
    Instance x;
    x.id = "L" + std::to_string(line_no);
    if (tok == "+") x.label = Label::positive;
    else if (tok == "-") x.label = Label::negative;
    else throw IngestionError(source, line_no, "expected '+' or '-', got '" + tok + "'");
    while (tokens >> tok) {
      if (tok == "0") x.values.push_back(0.0);
      else if (tok == "1") x.values.push_back(1.0);
      else if (tok == "?") x.values.push_back(kMissing);
      else throw IngestionError(source, line_no, "bad value token '" + tok + "'");
    }
    if (x.values.empty()) throw IngestionError(source, line_no, "instance has no values");
    if (!data) data.emplace(x.values.size());
    if (x.values.size() != data->arity())
      throw IngestionError(source, line_no, "expected " + std::to_string(data->arity()) + " values, got " +
                                                std::to_string(x.values.size()));
    data->add(std::move(x));
  }
  return data ? std::move(*data) : Dataset{};
}

inline Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open dataset '" + path + "'");
  return read_dataset(in, path);
}

inline void write_instance(std::ostream& out, const Instance& x) {
  out << (x.label == Label::positive ? '+' : '-');
  for (double v : x.values) {
    if (v == 0.0) out << " 0";
    else if (v == 1.0) out << " 1";
    else if (v == kMissing) out << " ?";
    else throw Error(ErrorCode::range, "instance '" + x.id + "' is not representable in the text format");
  }
  out << '\n';
}

/// Positives first, then negatives.
inline void write_dataset(std::ostream& out, const Dataset& d) {
  for (const auto& x : d.positives()) write_instance(out, x);
  for (const auto& x : d.negatives()) write_instance(out, x);
}

inline std::vector<Formula> read_formulas(std::istream& in, std::optional<std::size_t> arity = std::nullopt) {
  std::vector<Formula> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_formula(line, arity));
  }
  return out;
}

}  // namespace ubrain
