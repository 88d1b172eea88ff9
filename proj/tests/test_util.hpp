// test_util.hpp — small constructors shared by the test binaries.
#pragma once

#include <vector>

#include "k3lat/zmat.hpp"

namespace k3lat::testing {

inline ZMat zmat_of(const std::vector<std::vector<long>>& rows) {
    ZMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

inline QMat qmat_of(const std::vector<std::vector<Q>>& rows) {
    QMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

inline ZVec zvec_of(const std::vector<long>& v) {
    return ZVec(v.begin(), v.end());
}

inline QVec qvec_of(const std::vector<Q>& v) { return v; }

}  // namespace k3lat::testing
