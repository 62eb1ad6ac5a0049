#pragma once

#include <cstddef>
#include <deque>
#include <utility>

#include "gpor/gp.hpp"
#include "gpor/linalg.hpp"

namespace gpor {

/// FIFO buffer of the most recent P (eta, u) training pairs.
class WindowBuffer {
public:
    explicit WindowBuffer(std::size_t capacity, std::size_t eta_dim)
        : capacity_(capacity), eta_dim_(eta_dim) {}

    void push(const Vector& eta, double u) {
        if (eta.size() != eta_dim_) throw DimensionMismatch("WindowBuffer::push: eta dimension");
        pairs_.emplace_back(eta, u);
        if (pairs_.size() > capacity_) pairs_.pop_front();
        ++total_pushed_;
    }

    gp::Dataset as_dataset() const {
        gp::Dataset d;
        d.inputs.reserve(pairs_.size());
        d.targets.reserve(pairs_.size());
        for (const auto& [eta, u] : pairs_) {
            d.inputs.push_back(eta);
            d.targets.push_back(u);
        }
        return d;
    }

    std::size_t size() const { return pairs_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t total_pushed() const { return total_pushed_; }
    bool empty() const { return pairs_.empty(); }
    const std::pair<Vector, double>& oldest() const { return pairs_.front(); }

private:
    std::size_t capacity_;
    std::size_t eta_dim_;
    std::size_t total_pushed_ = 0;
    std::deque<std::pair<Vector, double>> pairs_;
};

}  // namespace gpor
