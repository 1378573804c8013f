#pragma once

#include <cmath>
#include <span>
#include <string>

#include "convdrift/errors.hpp"
#include "convdrift/math.hpp"

namespace convdrift {

struct Kernel {
    enum class Type { Linear, Rbf } type = Type::Rbf;
    double gamma = 1.0;  // rbf only

    double operator()(std::span<const double> a, std::span<const double> b) const {
        if (type == Type::Linear) return dot(a, b);
        return std::exp(-gamma * squared_distance(a, b));
    }

    static Kernel linear() { return {Type::Linear, 0.0}; }
    static Kernel rbf(double gamma) { return {Type::Rbf, gamma}; }
};

inline const char* to_string(Kernel::Type t) {
    return t == Kernel::Type::Linear ? "linear" : "rbf";
}

inline Kernel::Type kernel_type_from_string(const std::string& s) {
    if (s == "linear") return Kernel::Type::Linear;
    if (s == "rbf") return Kernel::Type::Rbf;
    throw InvalidParams("unknown kernel type: '" + s + "'");
}

}  // namespace convdrift
