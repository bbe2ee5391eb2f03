#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace spectraledge {

/// Diagonal signal R (singular values d_1 >= ... >= d_M >= 0) of an M x N
/// signal-plus-noise matrix. Immutable once built.
class SpectrumModel {
public:
    SpectrumModel() = default;

    /// Validates and sorts non-increasing. Ties are kept.
    SpectrumModel(std::vector<double> d, int n) : d_(std::move(d)), n_(n)
    {
        if (d_.empty()) {
            throw Error(ErrorKind::InvalidConfig, "signal list is empty");
        }
        if (n_ <= 0) {
            throw Error(ErrorKind::InvalidConfig, "N must be positive");
        }
        if (static_cast<long>(d_.size()) > n_) {
            throw Error(ErrorKind::InvalidConfig,
                        "M=" + std::to_string(d_.size()) + " exceeds N=" + std::to_string(n_));
        }
        for (double v : d_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw Error(ErrorKind::InvalidConfig, "signal entries must be finite and >= 0");
            }
        }
        std::sort(d_.begin(), d_.end(), std::greater<>());
    }

    const std::vector<double>& d() const noexcept { return d_; }
    int M() const noexcept { return static_cast<int>(d_.size()); }
    int N() const noexcept { return n_; }
    double c() const noexcept { return static_cast<double>(M()) / static_cast<double>(n_); }

    double d_sq(int i) const { return d_[static_cast<std::size_t>(i)] * d_[static_cast<std::size_t>(i)]; }
    double max_d_sq() const { return d_sq(0); }

    bool is_zero_signal() const noexcept
    {
        return std::all_of(d_.begin(), d_.end(), [](double v) { return v == 0.0; });
    }

    /// Atoms of the empirical measure of RR^*: (d_i^2, 1/M).
    std::vector<std::pair<double, double>> empirical_measure() const
    {
        std::vector<std::pair<double, double>> atoms;
        atoms.reserve(d_.size());
        const double w = 1.0 / static_cast<double>(M());
        for (int i = 0; i < M(); ++i) {
            atoms.emplace_back(d_sq(i), w);
        }
        return atoms;
    }

    /// d_i -> factor * d_i with the same dimensions.
    SpectrumModel scaled(double factor) const
    {
        std::vector<double> d = d_;
        for (double& v : d) {
            v *= factor;
        }
        return SpectrumModel(std::move(d), n_);
    }

    friend bool operator==(const SpectrumModel&, const SpectrumModel&) = default;

private:
    std::vector<double> d_;
    int n_ = 0;
};

/// Parsed form of a spectrum configuration. Kept separate from the model so
/// the same recipe can be re-instantiated at other sizes.
struct SpectrumSpec {
    enum class Type { Constant, Explicit, UniformSq };

    Type type = Type::Constant;
    int M = 0;
    int N = 0;
    double value = 0.0;        // constant
    std::vector<double> list;  // explicit
    double v_min = 0.0;        // uniform_sq
    double v_max = 0.0;

    SpectrumModel build() const
    {
        if (M <= 0 || N <= 0) {
            throw Error(ErrorKind::InvalidConfig, "M and N must be positive");
        }
        switch (type) {
        case Type::Constant:
            return SpectrumModel(std::vector<double>(static_cast<std::size_t>(M), value), N);
        case Type::Explicit:
            if (static_cast<int>(list.size()) != M) {
                throw Error(ErrorKind::InvalidConfig, "explicit list length does not match M");
            }
            return SpectrumModel(list, N);
        case Type::UniformSq: {
            if (!(v_min >= 0.0) || !(v_max >= v_min)) {
                throw Error(ErrorKind::InvalidConfig, "uniform_sq requires 0 <= v_min <= v_max");
            }
            std::vector<double> d(static_cast<std::size_t>(M));
            for (int i = 0; i < M; ++i) {
                const double sq = M == 1 ? v_max
                                         : v_max - static_cast<double>(i) * (v_max - v_min) /
                                                       static_cast<double>(M - 1);
                d[static_cast<std::size_t>(i)] = std::sqrt(sq);
            }
            return SpectrumModel(std::move(d), N);
        }
        }
        throw Error(ErrorKind::InvalidConfig, "unknown spectrum type");
    }

    /// Same recipe at new dimensions. Explicit lists cannot be resized.
    SpectrumSpec resized(int m, int n) const
    {
        if (type == Type::Explicit && m != M) {
            throw Error(ErrorKind::InvalidConfig, "explicit spectrum cannot be resized");
        }
        SpectrumSpec s = *this;
        s.M = m;
        s.N = n;
        return s;
    }
};

namespace detail {

inline int json_int(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw Error(ErrorKind::InvalidConfig, std::string("missing integer field '") + key + "'");
    }
    return j.at(key).get<int>();
}

inline double json_real(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw Error(ErrorKind::InvalidConfig, std::string("missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

} // namespace detail

/// Accepted shapes:
///   {"type":"constant","value":d,"M":m,"N":n}
///   {"type":"explicit","d":[...],"N":n}            (M optional, must match)
///   {"type":"uniform_sq","v_min":a,"v_max":b,"M":m,"N":n}
inline SpectrumSpec parse_spectrum_spec(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw Error(ErrorKind::InvalidConfig, "spectrum spec needs a string 'type'");
    }
    SpectrumSpec spec;
    const auto type = j.at("type").get<std::string>();
    spec.N = detail::json_int(j, "N");
    if (type == "constant") {
        spec.type = SpectrumSpec::Type::Constant;
        spec.M = detail::json_int(j, "M");
        spec.value = detail::json_real(j, "value");
    } else if (type == "explicit") {
        spec.type = SpectrumSpec::Type::Explicit;
        if (!j.contains("d") || !j.at("d").is_array()) {
            throw Error(ErrorKind::InvalidConfig, "explicit spectrum needs array 'd'");
        }
        for (const auto& v : j.at("d")) {
            if (!v.is_number()) {
                throw Error(ErrorKind::InvalidConfig, "explicit entries must be numbers");
            }
            spec.list.push_back(v.get<double>());
        }
        spec.M = static_cast<int>(spec.list.size());
        if (j.contains("M") && detail::json_int(j, "M") != spec.M) {
            throw Error(ErrorKind::InvalidConfig, "'M' does not match length of 'd'");
        }
        if (spec.list.empty()) {
            throw Error(ErrorKind::InvalidConfig, "signal list is empty");
        }
    } else if (type == "uniform_sq") {
        spec.type = SpectrumSpec::Type::UniformSq;
        spec.M = detail::json_int(j, "M");
        spec.v_min = detail::json_real(j, "v_min");
        spec.v_max = detail::json_real(j, "v_max");
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown spectrum type '" + type + "'");
    }
    return spec;
}

inline SpectrumModel load_spectrum(const nlohmann::json& j)
{
    return parse_spectrum_spec(j).build();
}

/// Serializes as an explicit list; load_spectrum(to_json(m)) == m.
inline nlohmann::json to_json(const SpectrumModel& model)
{
    return nlohmann::json{{"type", "explicit"}, {"d", model.d()}, {"M", model.M()}, {"N", model.N()}};
}

/// xi_r - d_1^2. Positive means the edge sits strictly right of the largest
/// signal value with that margin.
template <class Edge>
double check_assumption3(const SpectrumModel& model, const Edge& edge)
{
    return static_cast<double>(edge.xi_r) - model.max_d_sq();
}

} // namespace spectraledge
