#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnkit {

/// Integer-coefficient polynomials in one variable, dense representation.
/// Covers the rate expressions taken on the command line, e.g. "x^4" or
/// "x^2*(x-1)^2".
class Polynomial {
  public:
    Polynomial() : coeffs_{0} {}
    explicit Polynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(0);
        trim();
    }
    static Polynomial constant(std::int64_t c) { return Polynomial({c}); }
    static Polynomial variable() { return Polynomial({0, 1}); }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + double(coeffs_[i]);
        return acc;
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<std::int64_t>& coefficients() const { return coeffs_; }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<std::int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }
    Polynomial pow(std::int64_t e) const {
        if (e < 0) throw std::invalid_argument("negative exponent");
        Polynomial r = constant(1);
        for (std::int64_t i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<std::int64_t> coeffs_;
};

/// Grammar: expr = term (('+'|'-') term)*; term = factor ('*' factor)*;
/// factor = atom ('^' integer)?; atom = integer | 'x' | '(' expr ')' |
/// '-' atom.  Whitespace insignificant.
inline Polynomial parse_polynomial(const std::string& text) {
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
    auto peek = [&]() -> char {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    };
    auto fail = [&](const std::string& msg) -> void {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos) +
                                    ": " + msg);
    };

    std::function<Polynomial()> expr;
    std::function<Polynomial()> atom = [&]() -> Polynomial {
        char c = peek();
        if (c == '(') {
            ++pos;
            Polynomial inner = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (c == '-') {
            ++pos;
            return Polynomial::constant(0) - atom();
        }
        if (c == 'x' || c == 'X') {
            ++pos;
            return Polynomial::variable();
        }
        if (std::isdigit((unsigned char)c)) {
            std::int64_t v = 0;
            while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
                v = v * 10 + (text[pos++] - '0');
            return Polynomial::constant(v);
        }
        fail("expected integer, 'x', or '('");
        return {};
    };
    std::function<Polynomial()> factor = [&]() -> Polynomial {
        Polynomial base = atom();
        if (peek() == '^') {
            ++pos;
            if (!std::isdigit((unsigned char)peek())) fail("expected integer exponent");
            std::int64_t e = 0;
            while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
                e = e * 10 + (text[pos++] - '0');
            return base.pow(e);
        }
        return base;
    };
    std::function<Polynomial()> term = [&]() -> Polynomial {
        Polynomial p = factor();
        while (peek() == '*') {
            ++pos;
            p = p * factor();
        }
        return p;
    };
    expr = [&]() -> Polynomial {
        Polynomial p = term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                p = p + term();
            } else if (c == '-') {
                ++pos;
                p = p - term();
            } else {
                break;
            }
        }
        return p;
    };

    Polynomial p = expr();
    skip();
    if (pos != text.size()) fail("trailing input");
    return p;
}

}  // namespace crnkit
