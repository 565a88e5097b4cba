#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "stabkit/pauli.hpp"

namespace stabkit {

// Memoryless Pauli channel: one exact probability 4-vector (I,X,Y,Z) per
// qubit, each summing to exactly 1.
class PauliChannel {
  public:
    PauliChannel() = default;
    explicit PauliChannel(std::vector<std::array<Rational, 4>> q) : q_(std::move(q)) {
        for (const auto& v : q_) {
            Rational sum = v[0] + v[1] + v[2] + v[3];
            if (sum != 1) throw OutOfRange("qubit probabilities must sum to 1");
            for (const auto& p : v)
                if (p < 0 || p > 1) throw OutOfRange("probability outside [0,1]");
        }
    }

    std::size_t num_qubits() const { return q_.size(); }
    const std::array<Rational, 4>& qubit(std::size_t i) const { return q_[i]; }
    const Rational& prob(std::size_t i, PauliKind kind) const {
        return q_[i][std::size_t(kind)];
    }

  private:
    std::vector<std::array<Rational, 4>> q_;
};

namespace detail {
inline void check_unit_interval(const Rational& p, const char* what) {
    if (p < 0 || p > 1) throw OutOfRange(std::string(what) + " outside [0,1]");
}
}  // namespace detail

// Per qubit: q_I = (1-p/2)^2, q_X = q_Z = p/2 (1-p/2), q_Y = p^2/4.
inline PauliChannel independent_xz(std::size_t n, const Rational& p) {
    detail::check_unit_interval(p, "noise rate");
    Rational half = p / 2;
    Rational keep = 1 - half;
    std::array<Rational, 4> v{keep * keep, half * keep, half * half, half * keep};
    return PauliChannel(std::vector<std::array<Rational, 4>>(n, v));
}

// Per qubit: (1-p, p/3, p/3, p/3).
inline PauliChannel depolarizing(std::size_t n, const Rational& p) {
    detail::check_unit_interval(p, "noise rate");
    Rational third = p / 3;
    std::array<Rational, 4> v{1 - p, third, third, third};
    return PauliChannel(std::vector<std::array<Rational, 4>>(n, v));
}

// Single qubit with (1-q, 0, 0, q).
inline PauliChannel z_only(const Rational& q) {
    detail::check_unit_interval(q, "noise rate");
    return PauliChannel({{Rational(1) - q, Rational(0), Rational(0), q}});
}

inline PauliChannel error_free() { return z_only(0); }

// Single qubit with X and Z at rate t/(1+2t) each and no Y component, so a
// Y-free error of symplectic weight w has probability t^w / (1+2t)^n.
inline PauliChannel y_free(const Rational& t) {
    if (t < 0) throw OutOfRange("weight factor must be non-negative");
    Rational den = 1 + 2 * t;
    return PauliChannel({{Rational(1) / den, t / den, Rational(0), t / den}});
}

inline PauliChannel compose(const std::vector<PauliChannel>& parts) {
    std::vector<std::array<Rational, 4>> q;
    for (const auto& ch : parts)
        for (std::size_t i = 0; i < ch.num_qubits(); ++i) q.push_back(ch.qubit(i));
    return PauliChannel(std::move(q));
}

inline PauliChannel repeat(const PauliChannel& ch, std::size_t times) {
    std::vector<PauliChannel> parts(times, ch);
    return compose(parts);
}

// Prob(E) = prod_i q_{i,E_i}, exact.
inline Rational error_probability(const PauliChannel& ch, const PauliOperator& e) {
    if (e.num_qubits() != ch.num_qubits()) throw LengthMismatch("channel/error qubit mismatch");
    Rational p = 1;
    for (std::size_t i = 0; i < ch.num_qubits(); ++i) {
        const Rational& f = ch.prob(i, e.at(i));
        if (f == 0) return Rational(0);
        p *= f;
    }
    return p;
}

// JSON form: {"n":..., "qubits":[{"I":"a/b","X":...,"Y":...,"Z":...}, ...]}
inline nlohmann::json channel_to_json(const PauliChannel& ch) {
    nlohmann::json qubits = nlohmann::json::array();
    for (std::size_t i = 0; i < ch.num_qubits(); ++i) {
        qubits.push_back({{"I", to_fraction_string(ch.prob(i, PauliKind::I))},
                          {"X", to_fraction_string(ch.prob(i, PauliKind::X))},
                          {"Y", to_fraction_string(ch.prob(i, PauliKind::Y))},
                          {"Z", to_fraction_string(ch.prob(i, PauliKind::Z))}});
    }
    return {{"n", ch.num_qubits()}, {"qubits", qubits}};
}

inline PauliChannel channel_from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j.contains("qubits")) throw ParseError("channel JSON needs n, qubits");
    std::size_t n = j.at("n").get<std::size_t>();
    const auto& qubits = j.at("qubits");
    if (!qubits.is_array() || qubits.size() != n)
        throw ParseError("channel JSON qubit count mismatch");
    std::vector<std::array<Rational, 4>> q;
    for (const auto& e : qubits) {
        q.push_back({parse_rational(e.at("I").get<std::string>()),
                     parse_rational(e.at("X").get<std::string>()),
                     parse_rational(e.at("Y").get<std::string>()),
                     parse_rational(e.at("Z").get<std::string>())});
    }
    return PauliChannel(std::move(q));
}

// Shortcut specs for the CLI: "xz:p=1/8", "depol:p=1/10", "zonly:q=1/3",
// "yfree:t=2/3", "free"; anything else is parsed as channel JSON.
inline PauliChannel parse_channel_spec(const std::string& spec, std::size_t n) {
    auto value_after = [&](const std::string& prefix) {
        return parse_rational(spec.substr(prefix.size()));
    };
    if (spec.rfind("xz:p=", 0) == 0) return independent_xz(n, value_after("xz:p="));
    if (spec.rfind("depol:p=", 0) == 0) return depolarizing(n, value_after("depol:p="));
    if (spec.rfind("zonly:q=", 0) == 0) return repeat(z_only(value_after("zonly:q=")), n);
    if (spec.rfind("yfree:t=", 0) == 0) return repeat(y_free(value_after("yfree:t=")), n);
    if (spec == "free") return repeat(error_free(), n);
    nlohmann::json j = nlohmann::json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw ParseError("unrecognized channel spec: " + spec);
    PauliChannel ch = channel_from_json(j);
    if (ch.num_qubits() != n) throw ParseError("channel qubit count does not match code");
    return ch;
}

}  // namespace stabkit
