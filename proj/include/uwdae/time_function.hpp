#ifndef UWDAE_TIME_FUNCTION_HPP
#define UWDAE_TIME_FUNCTION_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

///
/// Vector-valued function of time, t -> R^dim.
///
/// Right-hand sides only ever enter the discretization through nodal samples,
/// so this is all the library needs to know about them.
///
class TimeFunction
{
public:
    using function_type = std::function<Vector(double)>;

    TimeFunction() = default;
    TimeFunction(Index dim, function_type fn) : dim_(dim), fn_(std::move(fn)) {}

    Index dim() const { return dim_; }
    explicit operator bool() const { return static_cast<bool>(fn_); }

    Vector operator()(double t) const
    {
        Vector v = fn_(t);
        if (v.size() != dim_)
            throw DimensionMismatch("time function returned a vector of size " +
                                    std::to_string(v.size()) + ", expected " +
                                    std::to_string(dim_));
        return v;
    }

    static TimeFunction zero(Index dim)
    {
        return {dim, [dim](double) { return Vector::Zero(dim); }};
    }

    static TimeFunction constant(Vector value)
    {
        const Index dim = value.size();
        return {dim, [v = std::move(value)](double) { return v; }};
    }

    /// t -> direction * g(t)
    static TimeFunction separable(Vector direction, std::function<double(double)> g)
    {
        const Index dim = direction.size();
        return {dim, [d = std::move(direction), g = std::move(g)](double t) {
                    return Vector(d * g(t));
                }};
    }

    /// Piecewise-linear interpolant of (times[k], values.col(k)); constant beyond the ends.
    static TimeFunction interpolate(std::vector<double> times, Matrix values)
    {
        if (times.empty() || static_cast<Index>(times.size()) != values.cols())
            throw DimensionMismatch("sample times and value columns differ in count");
        if (!std::is_sorted(times.begin(), times.end()) ||
            std::adjacent_find(times.begin(), times.end()) != times.end())
            throw InputError("sample times must be strictly increasing");
        const Index dim = values.rows();
        auto data = std::make_shared<const std::pair<std::vector<double>, Matrix>>(
            std::move(times), std::move(values));
        return {dim, [data](double t) -> Vector {
                    const auto& [ts, vs] = *data;
                    if (t <= ts.front())
                        return vs.col(0);
                    if (t >= ts.back())
                        return vs.col(vs.cols() - 1);
                    auto it       = std::upper_bound(ts.begin(), ts.end(), t);
                    const Index k = static_cast<Index>(it - ts.begin()) - 1;
                    const double w = (t - ts[k]) / (ts[k + 1] - ts[k]);
                    return (1.0 - w) * vs.col(k) + w * vs.col(k + 1);
                }};
    }

private:
    Index dim_ = 0;
    function_type fn_;
};

} // namespace uwdae

#endif // UWDAE_TIME_FUNCTION_HPP
