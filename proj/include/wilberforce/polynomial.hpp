#pragma once

// Sparse polynomials in four variables with exact coefficients.
//
// The variable set is a tag type so that phase-space polynomials,
// polynomials in the Hopf generators and functions on the reduced space
// cannot be mixed by accident.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wilberforce::sym {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline constexpr std::size_t num_vars = 4;
using Exponents = std::array<int, num_vars>;

inline int total_degree(const Exponents& e) noexcept { return e[0] + e[1] + e[2] + e[3]; }

inline Exponents operator+(const Exponents& a, const Exponents& b) noexcept {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

/// Gaussian rational re + i*im.
struct Gaussian {
    Rational re;
    Rational im;

    Gaussian() = default;
    Gaussian(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    Gaussian(int r) : re(r), im(0) {}

    Gaussian conj() const { return {re, -im}; }

    Gaussian& operator+=(const Gaussian& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Gaussian& operator-=(const Gaussian& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
};

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(const Gaussian& g) { return g.re == 0 && g.im == 0; }

inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// "n" or "n/d" (no unit denominator); used by the pretty-printer.
inline std::string to_short_string(const Rational& r) {
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

struct PhaseVars {
    static constexpr std::array<const char*, num_vars> names{"q1", "p1", "q2", "p2"};
};

struct HopfVars {
    static constexpr std::array<const char*, num_vars> names{"rho1", "rho2", "rho3", "rho4"};
};

/// Coordinates of the reduced space plus the energy level h as a symbol.
struct ReducedVars {
    static constexpr std::array<const char*, num_vars> names{"x", "y", "z", "h"};
};

template <typename Coeff, typename Vars>
class Polynomial {
public:
    using coefficient_type = Coeff;
    using Terms = std::map<Exponents, Coeff>;

    Polynomial() = default;

    static Polynomial constant(const Coeff& c) { return monomial({0, 0, 0, 0}, c); }

    static Polynomial variable(std::size_t i) {
        Exponents e{0, 0, 0, 0};
        e.at(i) = 1;
        return monomial(e, Coeff(1));
    }

    static Polynomial monomial(const Exponents& e, const Coeff& c) {
        Polynomial p;
        p.add_term(e, c);
        return p;
    }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Coeff coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, total_degree(e));
        return d;
    }

    /// Degree in variable i (-1 for the zero polynomial).
    int degree_in(std::size_t i) const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, e[i]);
        return d;
    }

    void add_term(const Exponents& e, const Coeff& c) {
        if (sym::is_zero(c))
            return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (sym::is_zero(it->second))
                terms_.erase(it);
        }
    }

    Polynomial homogeneous_part(int d) const {
        Polynomial out;
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == d)
                out.terms_.emplace(e, c);
        return out;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(const Coeff& s) {
        if (sym::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c = c * s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Coeff(-1); }
    friend Polynomial operator*(Polynomial a, const Coeff& s) { return a *= s; }
    friend Polynomial operator*(const Coeff& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                out.add_term(ea + eb, ca * cb);
        return out;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    Polynomial pow(unsigned n) const {
        Polynomial result = constant(Coeff(1));
        for (unsigned i = 0; i < n; ++i)
            result = result * *this;
        return result;
    }

    Polynomial derivative(std::size_t i) const {
        Polynomial out;
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0)
                continue;
            Exponents d = e;
            --d[i];
            out.add_term(d, c * Coeff(e[i]));
        }
        return out;
    }

    /// Applies fn to every coefficient, dropping terms that become zero.
    template <typename OtherCoeff, typename OtherVars = Vars, typename Fn>
    Polynomial<OtherCoeff, OtherVars> map_coefficients(Fn fn) const {
        Polynomial<OtherCoeff, OtherVars> out;
        for (const auto& [e, c] : terms_)
            out.add_term(e, fn(c));
        return out;
    }

    /// Substitutes polynomials (in a possibly different variable set) for
    /// the four variables.
    template <typename OtherVars>
    Polynomial<Coeff, OtherVars> substitute(const std::array<Polynomial<Coeff, OtherVars>, num_vars>& values) const {
        using Target = Polynomial<Coeff, OtherVars>;
        std::array<std::vector<Target>, num_vars> powers;
        auto power = [&](std::size_t v, int k) -> const Target& {
            auto& cache = powers[v];
            if (cache.empty())
                cache.push_back(Target::constant(Coeff(1)));
            while (static_cast<int>(cache.size()) <= k)
                cache.push_back(cache.back() * values[v]);
            return cache[static_cast<std::size_t>(k)];
        };
        Target out;
        for (const auto& [e, c] : terms_) {
            Target term = Target::constant(c);
            for (std::size_t v = 0; v < num_vars; ++v)
                if (e[v] > 0)
                    term = term * power(v, e[v]);
            out += term;
        }
        return out;
    }

    /// Terms in graded order: highest total degree first, then by exponent
    /// vector descending.
    std::vector<std::pair<Exponents, Coeff>> ordered_terms() const {
        std::vector<std::pair<Exponents, Coeff>> v(terms_.begin(), terms_.end());
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            const int da = total_degree(a.first);
            const int db = total_degree(b.first);
            if (da != db)
                return da > db;
            return a.first > b.first;
        });
        return v;
    }

private:
    Terms terms_;
};

template <typename Vars>
using RationalPolynomial = Polynomial<Rational, Vars>;

using PhasePoly = Polynomial<Rational, PhaseVars>;
using ComplexPhasePoly = Polynomial<Gaussian, PhaseVars>;
using HopfPoly = Polynomial<Rational, HopfVars>;
using ReducedPoly = Polynomial<Rational, ReducedVars>;

template <typename Vars>
std::string monomial_string(const Exponents& e) {
    std::string out;
    for (std::size_t v = 0; v < num_vars; ++v) {
        if (e[v] == 0)
            continue;
        if (!out.empty())
            out += '*';
        out += Vars::names[v];
        if (e[v] > 1)
            out += '^' + std::to_string(e[v]);
    }
    return out;
}

/// Deterministic human-readable form, e.g. "1/16*rho1*rho2".
template <typename Vars>
std::string to_string(const Polynomial<Rational, Vars>& p) {
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.ordered_terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        const std::string mono = monomial_string<Vars>(e);
        if (mono.empty())
            out += to_short_string(mag);
        else if (mag == 1)
            out += mono;
        else
            out += to_short_string(mag) + "*" + mono;
    }
    return out;
}

template <typename Vars>
std::ostream& operator<<(std::ostream& os, const Polynomial<Rational, Vars>& p) {
    return os << to_string(p);
}

/// Real and imaginary parts of a Gaussian-coefficient polynomial.
template <typename Vars>
Polynomial<Rational, Vars> real_part(const Polynomial<Gaussian, Vars>& p) {
    return p.template map_coefficients<Rational>([](const Gaussian& g) { return g.re; });
}

template <typename Vars>
Polynomial<Rational, Vars> imag_part(const Polynomial<Gaussian, Vars>& p) {
    return p.template map_coefficients<Rational>([](const Gaussian& g) { return g.im; });
}

template <typename Vars>
Polynomial<Gaussian, Vars> complexify(const Polynomial<Rational, Vars>& p) {
    return p.template map_coefficients<Gaussian>([](const Rational& r) { return Gaussian(r); });
}

/// Double-precision snapshot of a rational polynomial for fast evaluation.
class NumericPolynomial {
public:
    NumericPolynomial() = default;

    template <typename Vars>
    explicit NumericPolynomial(const Polynomial<Rational, Vars>& p) {
        terms_.reserve(p.size());
        for (const auto& [e, c] : p.terms())
            terms_.emplace_back(e, to_double(c));
    }

    double operator()(const std::array<double, num_vars>& x) const {
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (std::size_t v = 0; v < num_vars; ++v)
                for (int k = 0; k < e[v]; ++k)
                    t *= x[v];
            sum += t;
        }
        return sum;
    }

private:
    std::vector<std::pair<Exponents, double>> terms_;
};

} // namespace wilberforce::sym
