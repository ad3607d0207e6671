#pragma once

// Exact normal-form algebra on phase space (q1, p1, q2, p2):
// canonical Poisson bracket, pullback along the periodic H0 flow as a finite
// Fourier series in time, the averaging operators <.> and S, the first and
// second order normal forms, and rewriting of invariants in Hopf variables.

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "polynomial.hpp"

namespace wilberforce::sym {

enum PhaseVar : std::size_t { q1 = 0, p1 = 1, q2 = 2, p2 = 3 };

inline PhasePoly var(PhaseVar v) { return PhasePoly::variable(v); }

/// {f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i.
template <typename Coeff>
Polynomial<Coeff, PhaseVars> poisson(const Polynomial<Coeff, PhaseVars>& f, const Polynomial<Coeff, PhaseVars>& g) {
    Polynomial<Coeff, PhaseVars> out;
    out += f.derivative(q1) * g.derivative(p1);
    out -= f.derivative(p1) * g.derivative(q1);
    out += f.derivative(q2) * g.derivative(p2);
    out -= f.derivative(p2) * g.derivative(q2);
    return out;
}

/// Unperturbed Hamiltonian 1/2 (p1^2 + w1^2 q1^2 + p2^2 + w2^2 q2^2).
inline PhasePoly h0_poly(int omega1 = 1, int omega2 = 2) {
    const Rational half(1, 2);
    return half * (var(p1).pow(2) + Rational(omega1 * omega1) * var(q1).pow(2) + var(p2).pow(2) +
                   Rational(omega2 * omega2) * var(q2).pow(2));
}

/// The quartic coupling q1^2 q2^2.
inline PhasePoly coupling_poly() { return var(q1).pow(2) * var(q2).pow(2); }

/// Finite Fourier series sum_n f_n(q, p) e^{i n t} with Gaussian-rational
/// polynomial coefficients.
class HarmonicPoly {
public:
    using Harmonics = std::map<int, ComplexPhasePoly>;

    HarmonicPoly() = default;

    static HarmonicPoly constant(const ComplexPhasePoly& c) {
        HarmonicPoly h;
        h.add(0, c);
        return h;
    }

    const Harmonics& harmonics() const noexcept { return harmonics_; }

    ComplexPhasePoly coefficient(int n) const {
        auto it = harmonics_.find(n);
        return it == harmonics_.end() ? ComplexPhasePoly{} : it->second;
    }

    void add(int n, const ComplexPhasePoly& c) {
        if (c.is_zero())
            return;
        auto& slot = harmonics_[n];
        slot += c;
        if (slot.is_zero())
            harmonics_.erase(n);
    }

    HarmonicPoly& operator+=(const HarmonicPoly& o) {
        for (const auto& [n, c] : o.harmonics_)
            add(n, c);
        return *this;
    }

    friend HarmonicPoly operator*(const HarmonicPoly& a, const HarmonicPoly& b) {
        HarmonicPoly out;
        for (const auto& [na, ca] : a.harmonics_)
            for (const auto& [nb, cb] : b.harmonics_)
                out.add(na + nb, ca * cb);
        return out;
    }

    friend HarmonicPoly operator*(const HarmonicPoly& a, const Rational& s) {
        HarmonicPoly out;
        for (const auto& [n, c] : a.harmonics_)
            out.add(n, c * Gaussian(s));
        return out;
    }

    /// f_{-n} == conj(f_n) for every n, i.e. the series is real-valued.
    bool is_real() const {
        for (const auto& [n, c] : harmonics_) {
            const ComplexPhasePoly mirrored = coefficient(-n);
            if (!(mirrored == c.map_coefficients<Gaussian>([](const Gaussian& g) { return g.conj(); })))
                return false;
        }
        return true;
    }

    /// Value at t = 0: sum of all coefficients.
    ComplexPhasePoly at_zero() const {
        ComplexPhasePoly out;
        for (const auto& [n, c] : harmonics_)
            out += c;
        return out;
    }

private:
    Harmonics harmonics_;
};

namespace detail {

// Images of q1, p1, q2, p2 under the flow of H0 with integer frequencies,
// written with E_j = exp(i w_j t):
//   q(t) = 1/2 (q - i p/w) E + 1/2 (q + i p/w) E^-1
//   p(t) = 1/2 (p + i w q) E + 1/2 (p - i w q) E^-1
inline std::array<HarmonicPoly, num_vars> flow_images(int omega1, int omega2) {
    std::array<HarmonicPoly, num_vars> out;
    const Rational half(1, 2);
    auto build = [&](PhaseVar qv, PhaseVar pv, int w) {
        const ComplexPhasePoly q = complexify(var(qv));
        const ComplexPhasePoly p = complexify(var(pv));
        const Gaussian h(half);
        const Gaussian i_over_w(0, Rational(1, w) * half);
        const Gaussian i_w(0, Rational(w) * half);
        HarmonicPoly qt;
        qt.add(w, q * h - p * i_over_w);
        qt.add(-w, q * h + p * i_over_w);
        HarmonicPoly pt;
        pt.add(w, p * h + q * i_w);
        pt.add(-w, p * h - q * i_w);
        out[qv] = qt;
        out[pv] = pt;
    };
    build(q1, p1, omega1);
    build(q2, p2, omega2);
    return out;
}

inline void require_frequencies(int omega1, int omega2) {
    if (omega1 <= 0 || omega2 <= 0)
        throw InvalidArgument("frequencies must be positive integers");
}

} // namespace detail

/// Exact expansion of f composed with the H0 flow at time t.
inline HarmonicPoly pullback_flow(const PhasePoly& f, int omega1 = 1, int omega2 = 2) {
    detail::require_frequencies(omega1, omega2);
    const auto images = detail::flow_images(omega1, omega2);
    std::array<std::vector<HarmonicPoly>, num_vars> powers;
    auto power = [&](std::size_t v, int k) -> const HarmonicPoly& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(HarmonicPoly::constant(ComplexPhasePoly::constant(Gaussian(1))));
        while (static_cast<int>(cache.size()) <= k)
            cache.push_back(cache.back() * images[v]);
        return cache[static_cast<std::size_t>(k)];
    };

    HarmonicPoly out;
    for (const auto& [e, c] : f.terms()) {
        HarmonicPoly term = HarmonicPoly::constant(ComplexPhasePoly::constant(Gaussian(c)));
        for (std::size_t v = 0; v < num_vars; ++v)
            if (e[v] > 0)
                term = term * power(v, e[v]);
        out += term;
    }
    return out;
}

namespace detail {

inline PhasePoly require_real(const ComplexPhasePoly& p, const char* what) {
    if (!imag_part(p).is_zero())
        throw Error(std::string(what) + ": result has a nonzero imaginary part");
    return real_part(p);
}

} // namespace detail

/// <f>: the zero-frequency coefficient of the pulled-back series (period 2*pi).
inline PhasePoly average(const PhasePoly& f, int omega1 = 1, int omega2 = 2) {
    return detail::require_real(pullback_flow(f, omega1, omega2).coefficient(0), "average");
}

/// S(f) = 1/(2 pi) int_0^{2 pi} (t - pi) f(Fl^t) dt. The zero harmonic drops
/// out and harmonic n contributes f_n / (i n).
inline PhasePoly s_operator(const PhasePoly& f, int omega1 = 1, int omega2 = 2) {
    ComplexPhasePoly acc;
    const HarmonicPoly series = pullback_flow(f, omega1, omega2);
    for (const auto& [n, c] : series.harmonics()) {
        if (n == 0)
            continue;
        // 1/(i n) = -i/n
        acc += c * Gaussian(0, Rational(-1) / n);
    }
    return detail::require_real(acc, "s_operator");
}

/// N1 = <H1>.
inline PhasePoly normal_form_order1(const PhasePoly& H1, int omega1 = 1, int omega2 = 2) {
    return average(H1, omega1, omega2);
}

enum class N2Convention {
    /// <{S(H1), H1}>: the coefficient that pairs with (eps^2 / 2) in the normal form.
    printed,
    /// 1/2 <{S(H1), H1}>: the coefficient that pairs with eps^2.
    half,
};

/// Second-order normal form term.
///
/// The bracket inside is taken in the orientation where X_f = {f, .} is the
/// generator of the flow used by the averaging (X_H0 g = dg/dt along the H0
/// flow). In the canonical convention of poisson() that is {H1, S(H1)}.
inline PhasePoly normal_form_order2(const PhasePoly& H1, N2Convention convention = N2Convention::printed,
                                    int omega1 = 1, int omega2 = 2) {
    const PhasePoly S = s_operator(H1, omega1, omega2);
    PhasePoly n2 = average(poisson(H1, S), omega1, omega2);
    if (convention == N2Convention::half)
        n2 *= Rational(1, 2);
    return n2;
}

/// Hopf generators as phase-space polynomials:
///   rho1 = w1^2 q1^2 + p1^2, rho2 = w2^2 q2^2 + p2^2,
///   rho3 - i rho4 = (p1 + i w1 q1)^{w2} (p2 - i w2 q2)^{w1}.
/// For (1, 2) this is rho3 = p2 (p1^2 - q1^2) + 4 p1 q1 q2,
/// rho4 = 2 q2 (p1^2 - q1^2) - 2 q1 p1 p2.
inline std::array<PhasePoly, num_vars> hopf_generators(int omega1 = 1, int omega2 = 2) {
    detail::require_frequencies(omega1, omega2);
    std::array<PhasePoly, num_vars> g;
    g[0] = Rational(omega1 * omega1) * var(q1).pow(2) + var(p1).pow(2);
    g[1] = Rational(omega2 * omega2) * var(q2).pow(2) + var(p2).pow(2);
    const ComplexPhasePoly z1 = complexify(var(p1)) + complexify(var(q1)) * Gaussian(0, omega1);
    const ComplexPhasePoly z2bar = complexify(var(p2)) - complexify(var(q2)) * Gaussian(0, omega2);
    const ComplexPhasePoly w = z1.pow(static_cast<unsigned>(omega2)) * z2bar.pow(static_cast<unsigned>(omega1));
    g[2] = real_part(w);
    g[3] = -imag_part(w);
    return g;
}

/// Expands a Hopf polynomial back to phase space.
inline PhasePoly expand_hopf(const HopfPoly& P, int omega1 = 1, int omega2 = 2) {
    return P.substitute<PhaseVars>(hopf_generators(omega1, omega2));
}

inline HopfPoly rho(std::size_t i) { return HopfPoly::variable(i - 1); }

/// rho3^2 + rho4^2 - rho1^{w2} rho2^{w1}.
inline HopfPoly syzygy(int omega1 = 1, int omega2 = 2) {
    return rho(3).pow(2) + rho(4).pow(2) -
           rho(1).pow(static_cast<unsigned>(omega2)) * rho(2).pow(static_cast<unsigned>(omega1));
}

enum class SyzygyOrder {
    /// rewrite rho3^2 -> rho1^{w2} rho2^{w1} - rho4^2 (result has degree <= 1 in rho3)
    rho3_linear,
    /// rewrite rho1^{w2} rho2^{w1} -> rho3^2 + rho4^2
    rho1_rho2_reduced,
};

/// Unique representative modulo the syzygy ideal for the chosen rewriting.
inline HopfPoly canonicalize(const HopfPoly& P, SyzygyOrder order = SyzygyOrder::rho3_linear, int omega1 = 1,
                             int omega2 = 2) {
    HopfPoly current = P;
    for (;;) {
        HopfPoly next;
        bool changed = false;
        for (const auto& [e, c] : current.terms()) {
            if (order == SyzygyOrder::rho3_linear && e[2] >= 2) {
                Exponents rest = e;
                rest[2] -= 2;
                const HopfPoly replacement =
                    rho(1).pow(static_cast<unsigned>(omega2)) * rho(2).pow(static_cast<unsigned>(omega1)) -
                    rho(4).pow(2);
                next += HopfPoly::monomial(rest, c) * replacement;
                changed = true;
            } else if (order == SyzygyOrder::rho1_rho2_reduced && e[0] >= omega2 && e[1] >= omega1) {
                Exponents rest = e;
                rest[0] -= omega2;
                rest[1] -= omega1;
                next += HopfPoly::monomial(rest, c) * (rho(3).pow(2) + rho(4).pow(2));
                changed = true;
            } else {
                next.add_term(e, c);
            }
        }
        current = std::move(next);
        if (!changed)
            return current;
    }
}

inline bool equal_modulo_syzygy(const HopfPoly& a, const HopfPoly& b, int omega1 = 1, int omega2 = 2) {
    return canonicalize(a - b, SyzygyOrder::rho3_linear, omega1, omega2).is_zero();
}

/// Solves A x = b exactly. Returns false when inconsistent; free unknowns
/// are set to zero.
inline bool solve_exact(std::vector<std::vector<Rational>> A, std::vector<Rational> b, std::vector<Rational>& x) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows == 0 ? 0 : A[0].size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(A[piv], A[r]);
        std::swap(b[piv], b[r]);
        const Rational inv = 1 / A[r][c];
        for (std::size_t k = c; k < cols; ++k)
            A[r][k] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0)
                continue;
            const Rational factor = A[i][c];
            for (std::size_t k = c; k < cols; ++k)
                A[i][k] -= factor * A[r][k];
            b[i] -= factor * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0)
            return false;
    x.assign(cols, Rational(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        x[pivot_col[i]] = b[i];
    return true;
}

/// Writes an H0-invariant polynomial in the Hopf generators. The result has
/// degree <= 1 in rho3 (the rho3_linear canonical form) and expands back to
/// f exactly.
inline HopfPoly to_hopf(const PhasePoly& f, int omega1 = 1, int omega2 = 2) {
    detail::require_frequencies(omega1, omega2);
    if (!poisson(f, h0_poly(omega1, omega2)).is_zero())
        throw NotInvariant("polynomial does not Poisson-commute with H0: " + to_string(f));

    const auto gens = hopf_generators(omega1, omega2);
    const int odd_degree = omega1 + omega2;
    HopfPoly result;
    for (int d = 0; d <= f.degree(); ++d) {
        const PhasePoly part = f.homogeneous_part(d);
        if (part.is_zero())
            continue;

        // Basis rho1^a rho2^b rho3^c rho4^e with 2a + 2b + (w1 + w2)(c + e) = d and c <= 1.
        std::vector<Exponents> basis;
        for (int c = 0; c <= 1; ++c)
            for (int e = 0; (c + e) * odd_degree <= d; ++e) {
                const int rem = d - (c + e) * odd_degree;
                if (rem % 2 != 0)
                    continue;
                for (int a = 0; a <= rem / 2; ++a)
                    basis.push_back({a, rem / 2 - a, c, e});
            }

        std::vector<PhasePoly> images;
        images.reserve(basis.size());
        for (const auto& ex : basis)
            images.push_back(HopfPoly::monomial(ex, Rational(1)).substitute<PhaseVars>(gens));

        std::map<Exponents, std::size_t> row_of;
        auto row = [&](const Exponents& e) {
            auto [it, inserted] = row_of.try_emplace(e, row_of.size());
            return it->second;
        };
        for (const auto& [e, c] : part.terms())
            row(e);
        for (const auto& img : images)
            for (const auto& [e, c] : img.terms())
                row(e);

        std::vector<std::vector<Rational>> A(row_of.size(), std::vector<Rational>(basis.size(), Rational(0)));
        std::vector<Rational> b(row_of.size(), Rational(0));
        for (std::size_t j = 0; j < images.size(); ++j)
            for (const auto& [e, c] : images[j].terms())
                A[row_of.at(e)][j] = c;
        for (const auto& [e, c] : part.terms())
            b[row_of.at(e)] = c;

        std::vector<Rational> x;
        if (!solve_exact(std::move(A), std::move(b), x))
            throw NoRepresentation("no Hopf representation at degree " + std::to_string(d));
        for (std::size_t j = 0; j < basis.size(); ++j)
            result.add_term(basis[j], x[j]);
    }
    return result;
}

/// {"variables": [...], "terms": {"a,b,c,d": "num/den", ...}}
template <typename Vars>
nlohmann::json to_json(const Polynomial<Rational, Vars>& p) {
    nlohmann::json j;
    j["variables"] = std::vector<std::string>(Vars::names.begin(), Vars::names.end());
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [e, c] : p.terms())
        terms[std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2]) + "," +
              std::to_string(e[3])] = to_string(c);
    j["terms"] = terms;
    return j;
}

template <typename Vars>
Polynomial<Rational, Vars> from_json(const nlohmann::json& j) {
    const auto vars = j.at("variables").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < num_vars; ++i)
        if (vars.size() != num_vars || vars[i] != Vars::names[i])
            throw InvalidArgument("polynomial JSON has unexpected variables");
    Polynomial<Rational, Vars> p;
    for (const auto& [key, value] : j.at("terms").items()) {
        Exponents e{};
        std::size_t pos = 0;
        for (std::size_t v = 0; v < num_vars; ++v) {
            const std::size_t next = key.find(',', pos);
            e[v] = std::stoi(key.substr(pos, next - pos));
            pos = next == std::string::npos ? key.size() : next + 1;
        }
        const std::string s = value.template get<std::string>();
        const std::size_t slash = s.find('/');
        const Integer num(s.substr(0, slash));
        const Integer den(slash == std::string::npos ? std::string("1") : s.substr(slash + 1));
        p.add_term(e, Rational(num) / den);
    }
    return p;
}

} // namespace wilberforce::sym
