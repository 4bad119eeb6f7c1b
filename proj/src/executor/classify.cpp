// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/executor/executor.hpp"

namespace crudwalk::executor {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Ok: return "OK";
        case Classification::Warn: return "WARN";
        case Classification::Err: return "ERR";
        case Classification::NotTested: return "NOT_TESTED";
    }
    return "?";
}

Classification classify(bool pre, bool post, bool inv, int status) {
    const bool s2 = status >= 200 && status < 300;
    const bool s4 = status >= 400 && status < 500;
    if (status >= 500) return Classification::Err;
    using C = Classification;
    if (pre && post && inv) return s2 ? C::Ok : C::Err;
    if (pre && post) return C::Err;
    if (pre && inv) return C::Err;
    if (pre) {
        if (s4) return C::Warn;
        return C::Err;
    }
    if (post && inv) return C::Warn;
    if (post) return C::Err;
    // pre false, post false
    if (s4) return C::Ok;
    return C::Err;
}

}  // namespace crudwalk::executor
