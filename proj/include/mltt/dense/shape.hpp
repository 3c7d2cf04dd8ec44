// Copyright 2026 The mltt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mltt/errors.hpp"

namespace mltt {

namespace detail {
struct ShapeTag {};
struct FactorizationTag {};
}  // namespace detail

/// Ordered list of positive extents. Instantiated as `Shape` (mode sizes of a
/// tensor) and `Factorization` (block counts per mode); the two are distinct
/// types so one cannot be passed where the other is expected.
template <class Tag>
class BasicExtents {
public:
    using value_type = std::size_t;
    using const_iterator = std::vector<std::size_t>::const_iterator;

    BasicExtents() = default;
    BasicExtents(std::initializer_list<std::size_t> sizes) : sizes_(sizes) { validate(); }
    explicit BasicExtents(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) { validate(); }

    static BasicExtents ones(std::size_t order) { return BasicExtents(std::vector<std::size_t>(order, 1)); }

    std::size_t order() const noexcept { return sizes_.size(); }
    bool empty() const noexcept { return sizes_.empty(); }
    std::size_t operator[](std::size_t n) const { return sizes_.at(n); }
    const std::vector<std::size_t>& values() const noexcept { return sizes_; }
    const_iterator begin() const noexcept { return sizes_.begin(); }
    const_iterator end() const noexcept { return sizes_.end(); }

    /// Product of all extents (|J| in the usual notation); 1 for an empty list.
    std::size_t total() const {
        std::size_t p = 1;
        for (auto s : sizes_) {
            if (p > std::numeric_limits<std::size_t>::max() / s) throw DimensionError("extent product overflows");
            p *= s;
        }
        return p;
    }

    /// Returns a copy with extent n replaced.
    BasicExtents with(std::size_t n, std::size_t value) const {
        auto v = sizes_;
        v.at(n) = value;
        return BasicExtents(std::move(v));
    }

    friend bool operator==(const BasicExtents&, const BasicExtents&) = default;

    std::string str() const {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < sizes_.size(); ++i) os << (i ? "," : "") << sizes_[i];
        os << '}';
        return os.str();
    }

private:
    void validate() const {
        for (auto s : sizes_)
            if (s == 0) throw DimensionError("extents must be positive");
        (void)total();
    }

    std::vector<std::size_t> sizes_;
};

using Shape = BasicExtents<detail::ShapeTag>;
using Factorization = BasicExtents<detail::FactorizationTag>;

/// Element-wise product of a shape and a factorization, e.g. the column shape
/// I K of a mode row block tensor.
inline Shape scaled(const Shape& base, const Factorization& fact) {
    if (base.order() != fact.order())
        throw DimensionError("factorization order " + std::to_string(fact.order()) + " != shape order " +
                             std::to_string(base.order()));
    std::vector<std::size_t> v(base.order());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = base[n] * fact[n];
    return Shape(std::move(v));
}

/// Splits a linear index into mixed-radix digits, first digit fastest.
inline std::vector<std::size_t> unravel(std::size_t index, const std::vector<std::size_t>& radices) {
    std::vector<std::size_t> digits(radices.size());
    for (std::size_t n = 0; n < radices.size(); ++n) {
        digits[n] = index % radices[n];
        index /= radices[n];
    }
    return digits;
}

/// Inverse of `unravel`.
inline std::size_t ravel(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& radices) {
    std::size_t index = 0;
    std::size_t stride = 1;
    for (std::size_t n = 0; n < radices.size(); ++n) {
        index += digits[n] * stride;
        stride *= radices[n];
    }
    return index;
}

/// Power-of-two factorization of `count` over `order` modes. Factors of two
/// are dealt to the modes round-robin, so count = 2^k with k <= order gives
/// {2,...,2,1,...,1}.
inline Factorization binary_factorization(std::size_t count, std::size_t order) {
    if (order == 0) throw ConfigError("factorization needs at least one mode");
    std::vector<std::size_t> f(order, 1);
    std::size_t c = count;
    std::size_t n = 0;
    while (c > 1) {
        if (c % 2 != 0) throw ConfigError(std::to_string(count) + " is not a power of two");
        f[n % order] *= 2;
        ++n;
        c /= 2;
    }
    return Factorization(std::move(f));
}

}  // namespace mltt
