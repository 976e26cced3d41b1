#pragma once

#include "s2shock/state.hpp"

#include <array>
#include <functional>
#include <random>

namespace s2shock::testing {

using Jet = std::array<double, numerics::kJetSize>;

/// A state whose nodes carry the exact jets of w (and a constant z) on a uniform node set.
inline auto state_from_jets(const std::function<Jet(double)>& w, double z, double lo, double hi, std::size_t n)
    -> EquivariantState
{
    EquivariantState st;
    st.nodes.resize(n);
    st.theta_min = lo;
    st.dtheta = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = lo + (static_cast<double>(i) + 0.5) * st.dtheta;
        st.nodes.theta[i] = th;
        const auto j = w(th);
        for (int k = 0; k < numerics::kJetSize; ++k) {
            st.nodes.w[k][i] = j[k];
            st.nodes.z[k][i] = k == 0 ? z : 0.0;
        }
    }
    st.grid = st.nodes.theta;
    st.w = st.nodes.w[0];
    st.z = st.nodes.z[0];
    return st;
}

inline auto rng(std::uint64_t seed = 12345) -> std::mt19937_64 { return std::mt19937_64(seed); }

inline auto uniform(std::mt19937_64& g, double lo, double hi) -> double
{
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace s2shock::testing
