#include "s2shock/state.hpp"

namespace s2shock {

auto to_string(Scheme s) -> const char*
{
    return s == Scheme::Lagrangian ? "lagrangian" : "eulerian";
}

auto to_string(InitialKind k) -> const char*
{
    switch (k) {
    case InitialKind::Profile: return "profile";
    case InitialKind::Steady: return "steady";
    case InitialKind::Dip: return "dip";
    }
    return "?";
}

auto to_string(Tracker t) -> const char*
{
    return t == Tracker::Extremal ? "extremal" : "ode";
}

auto to_string(RunStatus s) -> const char*
{
    switch (s) {
    case RunStatus::BlewUp: return "blew_up";
    case RunStatus::MaxTime: return "max_time";
    case RunStatus::Vacuum: return "vacuum";
    case RunStatus::NumericalFailure: return "numerical_failure";
    case RunStatus::PoleSingularity: return "pole_singularity";
    case RunStatus::Running: return "running";
    }
    return "?";
}

void JetField::resize(std::size_t n)
{
    theta.resize(n);
    for (auto& v : w) v.resize(n);
    for (auto& v : z) v.resize(n);
}

}  // namespace s2shock
