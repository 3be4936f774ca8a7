#include "degenlag/chart.hpp"

#include <set>
#include <stdexcept>

namespace degenlag {

std::string position_name(std::size_t a) { return "q" + std::to_string(a + 1); }
std::string velocity_name(std::size_t a) { return "v" + std::to_string(a + 1); }
std::string momentum_name(std::size_t a) { return "p" + std::to_string(a + 1); }

Chart::Chart(std::vector<std::string> names, std::vector<Role> roles) : names_(std::move(names)), roles_(std::move(roles)) {
    if (names_.size() != roles_.size()) throw std::invalid_argument("chart: names and roles differ in length");
    std::set<std::string> seen;
    std::size_t nq = 0, nv = 0, np = 0;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw std::invalid_argument("chart: empty coordinate name");
        if (!seen.insert(names_[i]).second) throw std::invalid_argument("chart: duplicate coordinate '" + names_[i] + "'");
        switch (roles_[i]) {
            case Role::Position: ++nq; break;
            case Role::Velocity: ++nv; break;
            case Role::Momentum: ++np; break;
            case Role::Parameter: break;
        }
    }
    if (nq == 0) throw std::invalid_argument("chart: needs at least one position coordinate");
    if (nv != 0 && nv != nq) throw std::invalid_argument("chart: velocity count differs from position count");
    if (np != 0 && np != nq) throw std::invalid_argument("chart: momentum count differs from position count");
    n_ = nq;
}

namespace {

Chart build(std::size_t n, bool velocities, bool momenta) {
    std::vector<std::string> names;
    std::vector<Role> roles;
    for (std::size_t a = 0; a < n; ++a) {
        names.push_back(position_name(a));
        roles.push_back(Role::Position);
    }
    if (velocities) {
        for (std::size_t a = 0; a < n; ++a) {
            names.push_back(velocity_name(a));
            roles.push_back(Role::Velocity);
        }
    }
    if (momenta) {
        for (std::size_t a = 0; a < n; ++a) {
            names.push_back(momentum_name(a));
            roles.push_back(Role::Momentum);
        }
    }
    return Chart(std::move(names), std::move(roles));
}

}  // namespace

Chart Chart::configuration(std::size_t n) { return build(n, false, false); }
Chart Chart::tangent(std::size_t n) { return build(n, true, false); }
Chart Chart::cotangent(std::size_t n) { return build(n, false, true); }
Chart Chart::pontryagin(std::size_t n) { return build(n, true, true); }

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return std::nullopt;
}

}  // namespace degenlag
