#ifndef UWDAE_AFFINE_HPP
#define UWDAE_AFFINE_HPP

#include <string>
#include <utility>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/theta.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

template <typename Value>
struct AffineTerm
{
    ThetaExpression theta;
    Value value;
};

///
/// mu -> sum_q theta_q(mu) * M_q for matrices or vectors.
///
template <typename Value>
class AffineOperator
{
public:
    using term_type = AffineTerm<Value>;

    AffineOperator() = default;
    explicit AffineOperator(std::vector<term_type> terms) : terms_(std::move(terms)) {}
    /// Parameter-independent operator with the single term 1 * value.
    explicit AffineOperator(Value value)
    {
        terms_.push_back({ThetaExpression::constant(1.0), std::move(value)});
    }

    void add(ThetaExpression theta, Value value)
    {
        terms_.push_back({std::move(theta), std::move(value)});
    }

    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<term_type>& terms() const { return terms_; }
    const term_type& operator[](std::size_t q) const { return terms_[q]; }

    Index rows() const { return terms_.empty() ? 0 : terms_.front().value.rows(); }
    Index cols() const { return terms_.empty() ? 0 : terms_.front().value.cols(); }

    bool parameter_independent() const
    {
        for (const auto& t : terms_)
            if (!t.theta.is_constant())
                return false;
        return true;
    }

    std::size_t required_dimension() const
    {
        std::size_t r = 0;
        for (const auto& t : terms_)
            r = std::max(r, t.theta.required_dimension());
        return r;
    }

    Vector coefficients(const Parameter& mu) const
    {
        Vector c(static_cast<Index>(terms_.size()));
        for (std::size_t q = 0; q < terms_.size(); ++q)
            c[static_cast<Index>(q)] = terms_[q].theta(mu);
        return c;
    }

    /// Assembled sum; an empty operator evaluates to a 0x0 value.
    Value operator()(const Parameter& mu) const
    {
        if (terms_.empty())
            return Value();
        Value r = terms_.front().theta(mu) * terms_.front().value;
        for (std::size_t q = 1; q < terms_.size(); ++q)
            r += terms_[q].theta(mu) * terms_[q].value;
        if constexpr (std::is_same_v<Value, SparseMatrix>)
            r.makeCompressed();
        return r;
    }

private:
    std::vector<term_type> terms_;
};

template <typename Value>
Value affine_eval(const AffineOperator<Value>& op, const Parameter& mu)
{
    return op(mu);
}

} // namespace uwdae

#endif // UWDAE_AFFINE_HPP
