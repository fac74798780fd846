#pragma once

// Line-oriented run configuration: `key = value`, `#` comments, lists `[a, b]`,
// rationals `p/q` or decimals, quadratic irrationals as additive `sqrt(m)` terms.

#include "krsol/params.hpp"
#include "krsol/quadratic.hpp"
#include "krsol/rational.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace krsol {

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& what, std::size_t line, std::size_t column)
        : std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

inline std::map<std::string, double> default_tolerances() {
    return {{"exact", 0.0},     {"curvature", 1e-6}, {"soliton", 1e-5}, {"fd", 1e-4},
            {"deviation", 1e-10}, {"slope", 0.2},    {"decay", 0.2},    {"band", 2.0}};
}

struct RunConfig {
    std::optional<int> l;
    std::optional<int> n;
    std::vector<int> d;
    std::vector<QuadNumber> alpha;
    QuadNumber a{0};
    std::string task;
    std::uint64_t seed = 1;
    std::string out = "out";
    int samples = 50;
    int instances = 100;
    std::vector<double> radii{50.0, 100.0, 200.0, 400.0};
    std::vector<double> curve_alpha{0.3, 0.5, 0.7};
    double region_c = 1.0;
    double regular_xi1 = -1.0;
    std::vector<double> regular_range{1.5, 1e4};
    double singular_xil = 1.5;
    std::vector<double> singular_range{-0.5, -1e4};
    double potential_C = 3.0;
    std::map<std::string, double> tolerance = default_tolerances();
    /// Line on which each key was set, for error context.
    std::map<std::string, std::size_t> key_line;

    /// Validated parameters; validation errors carry the line of the offending key.
    SolitonParams params() const;
};

namespace detail {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t column0 = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(what, line, column0 + pos + 1); }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool starts_with(std::string_view s) {
        skip_ws();
        return text.substr(pos, s.size()) == s;
    }
};

inline bool number_char(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/'; }

/// An unsigned rational literal `p`, `p/q` or a decimal.
inline Rational read_rational(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.text.size() && number_char(c.text[c.pos])) ++c.pos;
    if (start == c.pos) c.fail("expected a number");
    try {
        return parse_rational(c.text.substr(start, c.pos - start));
    } catch (const RationalParseError& e) {
        throw ConfigError(std::string("malformed rational: ") + e.what(), c.line, c.column0 + start + e.position() + 1);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed rational: ") + e.what(), c.line, c.column0 + start + 1);
    }
}

inline long read_integer(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[c.pos]))) ++c.pos;
    long v = 0;
    auto [ptr, ec] = std::from_chars(c.text.data() + start, c.text.data() + c.pos, v);
    if (start == c.pos || ec != std::errc()) {
        c.pos = start;
        c.fail("expected an integer");
    }
    (void)ptr;
    return v;
}

/// term := rational | [rational '*'] 'sqrt(' m ')' ['/' q]
inline QuadNumber read_term(Cursor& c) {
    Rational coef(1);
    if (!c.starts_with("sqrt")) {
        coef = read_rational(c);
        if (!c.eat('*')) return QuadNumber(coef);
    }
    if (!c.starts_with("sqrt")) c.fail("expected sqrt(m)");
    c.pos += 4;
    c.expect('(');
    std::size_t at = c.pos;
    long m = read_integer(c);
    c.expect(')');
    if (c.eat('/')) {
        long q = read_integer(c);
        if (q == 0) c.fail("zero denominator");
        coef /= Rational(q);
    }
    if (m < 0) {
        c.pos = at;
        c.fail("negative radicand");
    }
    return QuadNumber(Rational(0), coef, m);
}

/// expr := ['-'] term (('+' | '-') term)*
inline QuadNumber read_quad(Cursor& c) {
    bool neg = c.eat('-');
    if (!neg) c.eat('+');
    QuadNumber v = read_term(c);
    if (neg) v = QuadNumber(0) - v;
    for (;;) {
        std::size_t at = c.pos;
        bool plus = c.eat('+');
        bool minus = !plus && c.eat('-');
        if (!plus && !minus) break;
        QuadNumber t = read_term(c);
        try {
            v = plus ? v + t : v - t;
        } catch (const FieldMismatch&) {
            c.pos = at;
            c.fail("terms with different radicands cannot be combined");
        }
    }
    return v;
}

inline double read_real(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.text.size() && (std::isdigit(static_cast<unsigned char>(c.text[c.pos])) ||
                                     std::string_view(".eE+-").find(c.text[c.pos]) != std::string_view::npos))
        ++c.pos;
    std::string s(c.text.substr(start, c.pos - start));
    // p/q is accepted for reals too.
    if (c.pos < c.text.size() && c.text[c.pos] == '/') {
        c.pos = start;
        Rational sign(1);
        if (c.eat('-')) sign = -1;
        return to_double(Rational(sign * read_rational(c)));
    }
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        c.pos = start;
        c.fail("malformed number");
    }
}

template <class Item>
std::vector<Item> read_list(Cursor& c, Item (*item)(Cursor&)) {
    c.expect('[');
    std::vector<Item> out;
    if (c.eat(']')) return out;
    do out.push_back(item(c));
    while (c.eat(','));
    c.expect(']');
    return out;
}

inline int read_int_signed(Cursor& c) {
    bool neg = c.eat('-');
    long v = read_integer(c);
    return static_cast<int>(neg ? -v : v);
}

inline std::string read_word(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    while (c.pos < c.text.size() && c.text[c.pos] != ' ' && c.text[c.pos] != '\t') ++c.pos;
    if (start == c.pos) c.fail("expected a value");
    return std::string(c.text.substr(start, c.pos - start));
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        begin = end + 1;

        detail::Cursor c{line, 0, line_no, 0};
        if (c.done()) continue;
        std::size_t key_start = c.pos;
        while (c.pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[c.pos])) || line[c.pos] == '_' ||
                                       line[c.pos] == '.'))
            ++c.pos;
        std::string key(line.substr(key_start, c.pos - key_start));
        if (key.empty()) c.fail("expected a key");
        c.expect('=');
        if (cfg.key_line.count(key)) {
            c.pos = key_start;
            c.fail("duplicate key '" + key + "'");
        }

        if (key == "l") cfg.l = detail::read_int_signed(c);
        else if (key == "n") cfg.n = detail::read_int_signed(c);
        else if (key == "d") cfg.d = detail::read_list<int>(c, &detail::read_int_signed);
        else if (key == "alpha") cfg.alpha = detail::read_list<QuadNumber>(c, &detail::read_quad);
        else if (key == "a") cfg.a = detail::read_quad(c);
        else if (key == "task") cfg.task = detail::read_word(c);
        else if (key == "out") cfg.out = detail::read_word(c);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::read_integer(c));
        else if (key == "samples") cfg.samples = static_cast<int>(detail::read_integer(c));
        else if (key == "instances") cfg.instances = static_cast<int>(detail::read_integer(c));
        else if (key == "radii") cfg.radii = detail::read_list<double>(c, &detail::read_real);
        else if (key == "curve_alpha") cfg.curve_alpha = detail::read_list<double>(c, &detail::read_real);
        else if (key == "region_c") cfg.region_c = detail::read_real(c);
        else if (key == "regular_xi1") cfg.regular_xi1 = detail::read_real(c);
        else if (key == "regular_range") cfg.regular_range = detail::read_list<double>(c, &detail::read_real);
        else if (key == "singular_xil") cfg.singular_xil = detail::read_real(c);
        else if (key == "singular_range") cfg.singular_range = detail::read_list<double>(c, &detail::read_real);
        else if (key == "potential_C") cfg.potential_C = detail::read_real(c);
        else if (key.rfind("tolerance.", 0) == 0 && cfg.tolerance.count(key.substr(10)))
            cfg.tolerance[key.substr(10)] = detail::read_real(c);
        else {
            c.pos = key_start;
            c.fail("unknown key '" + key + "'");
        }
        if (!c.done()) c.fail("trailing characters");
        cfg.key_line[key] = line_no;
        if ((key == "regular_range" || key == "singular_range") &&
            (key == "regular_range" ? cfg.regular_range : cfg.singular_range).size() != 2)
            throw ConfigError(key + " needs two entries", line_no, 1);
        if (end == text.size()) break;
    }
    return cfg;
}

inline SolitonParams RunConfig::params() const {
    auto line_of = [&](const std::string& k) -> std::size_t {
        auto it = key_line.find(k);
        return it == key_line.end() ? 0 : it->second;
    };
    SolitonParams p = make_params(d, alpha, a);
    if (l && *l != p.l())
        throw ConfigError("l = " + std::to_string(*l) + " does not match d (l = " + std::to_string(p.l()) + ")",
                          line_of("l"), 1);
    if (n && *n != p.n())
        throw ConfigError("n = " + std::to_string(*n) + " does not match d (n = " + std::to_string(p.n()) + ")",
                          line_of("n"), 1);
    try {
        validate(p.partition);
    } catch (const ParamsError& e) {
        throw ConfigError(e.what(), line_of("d"), 1);
    }
    try {
        validate(p);
    } catch (const ParamsError& e) {
        std::string what = e.what();
        std::string key = what.find("a must") == 0 ? "a" : "alpha";
        throw ConfigError(what, line_of(key), 1);
    }
    return p;
}

/// Applies a `K=V` override from the command line.
inline void apply_tolerance(RunConfig& cfg, std::string_view kv) {
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("tolerance override must be K=V");
    std::string k(kv.substr(0, eq));
    if (!cfg.tolerance.count(k)) throw std::invalid_argument("unknown tolerance '" + k + "'");
    detail::Cursor c{kv.substr(eq + 1), 0, 0, eq + 1};
    double v = detail::read_real(c);
    if (!c.done()) throw std::invalid_argument("malformed tolerance value in '" + std::string(kv) + "'");
    cfg.tolerance[k] = v;
}

}  // namespace krsol
