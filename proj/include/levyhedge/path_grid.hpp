#pragma once

#include <cmath>
#include <vector>

#include "levyhedge/errors.hpp"

namespace levyhedge {

/// One sampled path: S_t = S0 exp(log_prices[k]) at times[k], log_prices[0] = 0.
struct PathGrid {
    std::vector<double> times;
    std::vector<double> log_prices;

    std::size_t size() const { return times.size(); }

    void validate() const
    {
        if (times.size() != log_prices.size() || times.size() < 2)
            throw DomainError("PathGrid: times and log_prices must have equal length >= 2");
        if (times.front() != 0.0 || log_prices.front() != 0.0)
            throw DomainError("PathGrid: the path must start at time 0 with log price 0");
        for (std::size_t k = 1; k < times.size(); ++k) {
            if (!(times[k] > times[k - 1])) throw DomainError("PathGrid: times must be strictly increasing");
            if (!std::isfinite(log_prices[k])) throw DomainError("PathGrid: log prices must be finite");
        }
    }
};

} // namespace levyhedge
