#ifndef UWDAE_THETA_HPP
#define UWDAE_THETA_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

///
/// Scalar coefficient function of an affine decomposition.
///
/// A closed grammar of constant, single-component and monomial expressions so
/// that systems and reduced models stay serializable. `callback` is an
/// in-library escape hatch that cannot be written to a manifest.
///
class ThetaExpression
{
public:
    struct Constant
    {
        double value = 1.0;
    };
    struct Component
    {
        std::size_t index = 0;
    };
    /// coeff * prod_i mu_i^exponents[i]
    struct Monomial
    {
        double coeff = 1.0;
        std::vector<int> exponents;
    };
    struct Callback
    {
        std::function<double(const Parameter&)> fn;
        std::size_t min_dimension = 0;
    };

    ThetaExpression() : expr_(Constant{1.0}) {}

    static ThetaExpression constant(double c) { return ThetaExpression(Constant{c}); }
    static ThetaExpression component(std::size_t j) { return ThetaExpression(Component{j}); }
    static ThetaExpression monomial(double coeff, std::vector<int> exponents)
    {
        return ThetaExpression(Monomial{coeff, std::move(exponents)});
    }
    static ThetaExpression callback(std::function<double(const Parameter&)> fn,
                                    std::size_t min_dimension = 0)
    {
        return ThetaExpression(Callback{std::move(fn), min_dimension});
    }

    /// Smallest parameter dimension this expression can be evaluated on.
    std::size_t required_dimension() const
    {
        return std::visit(
            [](const auto& e) -> std::size_t {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, Constant>)
                    return 0;
                else if constexpr (std::is_same_v<T, Component>)
                    return e.index + 1;
                else if constexpr (std::is_same_v<T, Monomial>)
                {
                    std::size_t r = 0;
                    for (std::size_t i = 0; i < e.exponents.size(); ++i)
                        if (e.exponents[i] != 0)
                            r = i + 1;
                    return r;
                }
                else
                    return e.min_dimension;
            },
            expr_);
    }

    double operator()(const Parameter& mu) const
    {
        if (static_cast<std::size_t>(mu.size()) < required_dimension())
            throw ParameterDimensionMismatch(
                "theta expression needs a parameter of dimension >= " +
                std::to_string(required_dimension()) + ", got " +
                std::to_string(mu.size()));
        return std::visit(
            [&mu](const auto& e) -> double {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, Constant>)
                    return e.value;
                else if constexpr (std::is_same_v<T, Component>)
                    return mu[static_cast<Index>(e.index)];
                else if constexpr (std::is_same_v<T, Monomial>)
                {
                    double r = e.coeff;
                    for (std::size_t i = 0; i < e.exponents.size(); ++i)
                        if (e.exponents[i] != 0)
                            r *= std::pow(mu[static_cast<Index>(i)], e.exponents[i]);
                    return r;
                }
                else
                    return e.fn(mu);
            },
            expr_);
    }

    bool is_constant() const { return std::holds_alternative<Constant>(expr_); }
    bool serializable() const { return !std::holds_alternative<Callback>(expr_); }

    const Constant* as_constant() const { return std::get_if<Constant>(&expr_); }
    const Component* as_component() const { return std::get_if<Component>(&expr_); }
    const Monomial* as_monomial() const { return std::get_if<Monomial>(&expr_); }

    /// Same expression with every parameter index moved up by `offset`.
    ThetaExpression shifted(std::size_t offset) const
    {
        if (offset == 0 || is_constant())
            return *this;
        if (auto c = as_component())
            return component(c->index + offset);
        if (auto m = as_monomial())
        {
            std::vector<int> ex(offset, 0);
            ex.insert(ex.end(), m->exponents.begin(), m->exponents.end());
            return monomial(m->coeff, std::move(ex));
        }
        const auto& cb = std::get<Callback>(expr_);
        auto fn        = cb.fn;
        return callback(
            [fn, offset](const Parameter& mu) {
                return fn(mu.tail(mu.size() - static_cast<Index>(offset)));
            },
            cb.min_dimension + offset);
    }

    friend ThetaExpression product(const ThetaExpression& a, const ThetaExpression& b)
    {
        if (!a.serializable() || !b.serializable())
        {
            auto dim = std::max(a.required_dimension(), b.required_dimension());
            return callback([a, b](const Parameter& mu) { return a(mu) * b(mu); }, dim);
        }
        if (a.is_constant() && b.is_constant())
            return constant(a.as_constant()->value * b.as_constant()->value);
        auto ma = a.to_monomial();
        auto mb = b.to_monomial();
        std::vector<int> ex(std::max(ma.exponents.size(), mb.exponents.size()), 0);
        for (std::size_t i = 0; i < ma.exponents.size(); ++i)
            ex[i] += ma.exponents[i];
        for (std::size_t i = 0; i < mb.exponents.size(); ++i)
            ex[i] += mb.exponents[i];
        return monomial(ma.coeff * mb.coeff, std::move(ex));
    }

private:
    template <typename T>
    explicit ThetaExpression(T e) : expr_(std::move(e))
    {
    }

    Monomial to_monomial() const
    {
        if (auto c = as_constant())
            return Monomial{c->value, {}};
        if (auto c = as_component())
        {
            std::vector<int> ex(c->index + 1, 0);
            ex[c->index] = 1;
            return Monomial{1.0, std::move(ex)};
        }
        return std::get<Monomial>(expr_);
    }

    std::variant<Constant, Component, Monomial, Callback> expr_;
};

} // namespace uwdae

#endif // UWDAE_THETA_HPP
