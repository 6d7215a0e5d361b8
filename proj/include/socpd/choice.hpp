#ifndef SOCPD_CHOICE_HPP
#define SOCPD_CHOICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "socpd/instance.hpp"

namespace socpd {

/// Probabilities are clamped to [kProbEps, 1 - kProbEps] before any log is
/// taken inside cut coefficients or gradients, capping them at |log eps| + 1.
inline constexpr double kProbEps = 1e-9;

inline double clamp_probability(double x) {
    return std::clamp(x, kProbEps, 1.0 - kProbEps);
}

/// Numerically stable sigmoid e^u / (1 + e^u).
inline double logistic(double u) {
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

/// Overflow-safe log(1 + e^u). Convex; derivative is logistic(u).
inline double softplus(double u) {
    if (u > 30.0) {
        return u + std::log1p(std::exp(-u));
    }
    return std::log1p(std::exp(u));
}

/// Per-type utilities u_k = beta0_k + beta_k . a.
inline std::vector<double> utility(const Instance& inst, const DesignVector& design) {
    if (static_cast<int>(design.a.size()) != inst.n) {
        throw std::invalid_argument("utility: design length does not match attribute count");
    }
    std::vector<double> u(static_cast<std::size_t>(inst.K));
    for (int k = 0; k < inst.K; ++k) {
        double acc = inst.beta0[static_cast<std::size_t>(k)];
        const auto& row = inst.beta[static_cast<std::size_t>(k)];
        for (int i = 0; i < inst.n; ++i) {
            if (design.a[static_cast<std::size_t>(i)] != 0) {
                acc += row[static_cast<std::size_t>(i)];
            }
        }
        u[static_cast<std::size_t>(k)] = acc;
    }
    return u;
}

/// Purchase / no-purchase probability pair per customer type.
struct ChoiceProbabilities {
    std::vector<double> x1;  // purchase
    std::vector<double> x0;  // outside option
};

inline ChoiceProbabilities choice_probabilities(const Instance& inst, const DesignVector& design) {
    const std::vector<double> u = utility(inst, design);
    ChoiceProbabilities p;
    p.x1.resize(u.size());
    p.x0.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        p.x1[k] = logistic(u[k]);
        p.x0[k] = 1.0 - p.x1[k];
    }
    return p;
}

/// Weighted purchase share sum_k lambda_k sigma(u_k(a)).
inline double share_of_choice(const Instance& inst, const DesignVector& design) {
    const std::vector<double> u = utility(inst, design);
    double share = 0.0;
    for (int k = 0; k < inst.K; ++k) {
        share += inst.lambda[static_cast<std::size_t>(k)] * logistic(u[static_cast<std::size_t>(k)]);
    }
    return share;
}

/// Linear margin R(a) = r0 + sum_i r_i a_i of an expected-profit instance.
inline double design_margin(const Instance& inst, const DesignVector& design) {
    if (inst.objective.kind != ObjectiveKind::ExpectedProfit) {
        throw std::logic_error("design_margin: instance objective is not expected_profit");
    }
    double m = inst.objective.r0;
    for (int i = 0; i < inst.n; ++i) {
        if (design.a[static_cast<std::size_t>(i)] != 0) {
            m += inst.objective.r[static_cast<std::size_t>(i)];
        }
    }
    return m;
}

/// R(a) times the purchase share.
inline double expected_profit(const Instance& inst, const DesignVector& design) {
    return design_margin(inst, design) * share_of_choice(inst, design);
}

/// Weighted geometric mean prod_k sigma(u_k)^{lambda_k}, accumulated in log
/// space so large K cannot underflow.
inline double log_geometric_mean_objective(const Instance& inst, const DesignVector& design) {
    const std::vector<double> u = utility(inst, design);
    double acc = 0.0;
    for (int k = 0; k < inst.K; ++k) {
        const double uk = u[static_cast<std::size_t>(k)];
        acc += inst.lambda[static_cast<std::size_t>(k)] * (uk - softplus(uk));
    }
    return acc;
}

inline double geometric_mean_objective(const Instance& inst, const DesignVector& design) {
    return std::exp(log_geometric_mean_objective(inst, design));
}

/// Evaluates a design under the requested criterion.
inline double objective_value(const Instance& inst, const DesignVector& design, ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::ShareOfChoice:
            return share_of_choice(inst, design);
        case ObjectiveKind::ExpectedProfit:
            return expected_profit(inst, design);
        case ObjectiveKind::GeometricMean:
            return geometric_mean_objective(inst, design);
    }
    throw std::logic_error("objective_value: unknown objective kind");
}

namespace detail {
inline double xlogx(double x) {
    if (x < 0.0) {
        throw std::domain_error("xlogx: negative argument");
    }
    return x == 0.0 ? 0.0 : x * std::log(x);
}
}  // namespace detail

/// Defect of a candidate (w, x1, x0, u) against the representative-agent
/// optimum: -w + x1 log x1 + x0 log x0 + softplus(u). Nonpositive exactly on
/// points consistent with logit probabilities; convex, so its tangent planes
/// are globally valid cuts. Uses the convention 0 log 0 = 0.
inline double logit_defect(double w, double x1, double x0, double u) {
    return -w + detail::xlogx(x1) + detail::xlogx(x0) + softplus(u);
}

/// Gradient of logit_defect w.r.t. (w, x1, x0, u). Requires x1, x0 > 0;
/// callers clamp with clamp_probability first.
inline std::array<double, 4> logit_defect_gradient(double x1, double x0, double u) {
    if (x1 <= 0.0 || x0 <= 0.0) {
        throw std::domain_error("logit_defect_gradient: probabilities must be positive");
    }
    return {-1.0, std::log(x1) + 1.0, std::log(x0) + 1.0, logistic(u)};
}

}  // namespace socpd

#endif  // SOCPD_CHOICE_HPP
