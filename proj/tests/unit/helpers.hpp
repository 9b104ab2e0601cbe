#pragma once

#include <catch_amalgamated.hpp>

#include "hocdvs/error.hpp"

// Asserts that `expr` throws hocdvs::Error carrying `expected`.
#define REQUIRE_ERROR_CODE(expr, expected)                                  \
    do {                                                                    \
        bool thrown_ = false;                                               \
        try {                                                               \
            (void)(expr);                                                   \
        } catch (const hocdvs::Error& e_) {                                 \
            thrown_ = true;                                                 \
            INFO(e_.what());                                                \
            REQUIRE(e_.code() == (expected));                               \
        }                                                                   \
        REQUIRE(thrown_);                                                   \
    } while (0)

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
