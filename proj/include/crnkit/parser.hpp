#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crnkit/network.hpp"

namespace crnkit {

/// Diagnostic with 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) +
                             ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

namespace detail {

// One statement per line:
//   complex ("->" | "<->") complex ":" const ("," const)?
// complex  = "0" | term ("+" term)*
// term     = [integer] identifier          (coefficient prefix, e.g. "3B")
// "#" starts a comment; blank lines are skipped.  "<->" takes two constants
// (forward first), "->" exactly one.
class LineParser {
  public:
    LineParser(std::string_view text, int line_no) : text_(text), line_(line_no) {}

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    int column() const { return static_cast<int>(pos_) + 1; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column()); }
    [[noreturn]] void fail_at(const std::string& msg, int col) const {
        throw ParseError(msg, line_, col);
    }

    bool consume(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected species identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        if (start == pos_) fail("expected integer");
        std::int64_t value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{}) {
            pos_ = start;
            fail("integer out of range");
        }
        return value;
    }

    double number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit((unsigned char)text_[pos_]) ||
                                       text_[pos_] == '.' || text_[pos_] == 'e' ||
                                       text_[pos_] == 'E' || text_[pos_] == '+' ||
                                       text_[pos_] == '-'))
            ++pos_;
        if (start == pos_) fail("expected rate constant");
        std::string tok(text_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) {
                pos_ = start;
                fail("malformed number '" + tok + "'");
            }
            return v;
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number '" + tok + "'");
        }
    }

    bool peek_digit() {
        skip_ws();
        return pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_]);
    }
    bool peek_identifier() {
        skip_ws();
        return pos_ < text_.size() &&
               (std::isalpha((unsigned char)text_[pos_]) || text_[pos_] == '_');
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

// A complex under construction: species name -> coefficient.  The species
// universe is discovered while parsing, so complexes stay symbolic until the
// whole document has been read.
using SymbolicComplex = std::map<std::string, std::int64_t>;

inline SymbolicComplex parse_complex(LineParser& p, std::vector<std::string>& species_order) {
    SymbolicComplex out;
    p.skip_ws();
    if (p.peek_digit()) {
        int col = p.column();
        std::int64_t coeff = p.integer();
        if (coeff == 0) {
            // The empty complex: the bare literal "0", nothing else.
            if (p.peek_identifier()) p.fail_at("zero stoichiometric coefficient", col);
            if (p.consume("+")) p.fail_at("the empty complex is written as a bare '0'", col);
            return out;
        }
        std::string name = p.identifier();
        if (std::find(species_order.begin(), species_order.end(), name) == species_order.end())
            species_order.push_back(name);
        out[name] += coeff;
    } else {
        std::string name = p.identifier();
        if (std::find(species_order.begin(), species_order.end(), name) == species_order.end())
            species_order.push_back(name);
        out[name] += 1;
    }
    while (p.consume("+")) {
        std::int64_t coeff = 1;
        if (p.peek_digit()) {
            int col = p.column();
            coeff = p.integer();
            if (coeff == 0) p.fail_at("zero stoichiometric coefficient", col);
        }
        std::string name = p.identifier();
        if (std::find(species_order.begin(), species_order.end(), name) == species_order.end())
            species_order.push_back(name);
        out[name] += coeff;
    }
    return out;
}

inline Complex realize(const SymbolicComplex& sym, const std::vector<std::string>& species) {
    std::vector<std::int64_t> coeffs(species.size(), 0);
    for (std::size_t i = 0; i < species.size(); ++i) {
        auto it = sym.find(species[i]);
        if (it != sym.end()) coeffs[i] = it->second;
    }
    return Complex(coeffs);
}

}  // namespace detail

/// Parses the `.crn` grammar into a network.  Throws ParseError with line and
/// column on any malformed input; network-level invariant violations
/// (self-loop, duplicate reaction, non-positive constant) are reported the
/// same way, anchored at the offending line.
inline ReactionNetwork parse_network(const std::string& text) {
    struct PendingReaction {
        detail::SymbolicComplex source, product;
        double kappa;
        int line, column;
    };
    std::vector<std::string> species_order;
    std::vector<PendingReaction> pending;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);

        detail::LineParser p(raw, line_no);
        if (p.at_end()) continue;

        detail::SymbolicComplex lhs = detail::parse_complex(p, species_order);

        bool reversible;
        int arrow_col = p.column();
        if (p.consume("<->"))
            reversible = true;
        else if (p.consume("->"))
            reversible = false;
        else
            throw ParseError("expected '->' or '<->'", line_no, arrow_col);

        detail::SymbolicComplex rhs = detail::parse_complex(p, species_order);

        if (!p.consume(":")) p.fail("expected ':' before rate constants");

        int const_col = p.column();
        double k_fwd = p.number();
        if (reversible) {
            if (!p.consume(",")) p.fail("reversible reaction needs two rate constants");
            int rcol = p.column();
            double k_rev = p.number();
            if (!(k_rev > 0.0)) throw ParseError("rate constant must be positive", line_no, rcol);
            if (!(k_fwd > 0.0))
                throw ParseError("rate constant must be positive", line_no, const_col);
            pending.push_back({lhs, rhs, k_fwd, line_no, const_col});
            pending.push_back({rhs, lhs, k_rev, line_no, rcol});
        } else {
            if (!(k_fwd > 0.0))
                throw ParseError("rate constant must be positive", line_no, const_col);
            if (p.consume(","))
                p.fail("'->' takes a single rate constant (use '<->' for a pair)");
            pending.push_back({lhs, rhs, k_fwd, line_no, const_col});
        }
        if (!p.at_end()) p.fail("trailing input after statement");
    }

    if (pending.empty()) throw ParseError("no reactions in input", std::max(line_no, 1), 1);

    std::vector<Reaction> reactions;
    reactions.reserve(pending.size());
    for (const auto& pr : pending) {
        Complex src = detail::realize(pr.source, species_order);
        Complex prod = detail::realize(pr.product, species_order);
        if (src == prod) throw ParseError("self-loop reaction (source equals product)", pr.line, 1);
        for (const auto& r : reactions)
            if (r.source == src && r.product == prod)
                throw ParseError("duplicate reaction (same source and product)", pr.line, 1);
        reactions.emplace_back(std::move(src), std::move(prod), pr.kappa);
    }
    return ReactionNetwork(species_order, reactions);
}

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Renders a network back to `.crn` text.  Reverse pairs collapse onto one
/// "<->" line with the forward constant first; parse(format(net)) gives back
/// the same network up to reaction order.
inline std::string format_network(const ReactionNetwork& net) {
    const auto& species = net.species_names();
    const auto& rs = net.reactions();
    std::vector<bool> done(rs.size(), false);
    std::string out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        std::string line = format_complex(rs[i].source, species);
        std::size_t partner = rs.size();
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            if (!done[j] && rs[j].source == rs[i].product && rs[j].product == rs[i].source) {
                partner = j;
                break;
            }
        }
        if (partner < rs.size()) {
            done[partner] = true;
            line += " <-> " + format_complex(rs[i].product, species) + " : " +
                    detail::format_number(rs[i].rate_constant) + ", " +
                    detail::format_number(rs[partner].rate_constant);
        } else {
            line += " -> " + format_complex(rs[i].product, species) + " : " +
                    detail::format_number(rs[i].rate_constant);
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace crnkit
