#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace degenlag {

enum class Role { Position, Velocity, Momentum, Parameter };

/// An ordered coordinate system. All the bundles handled here (Q, TQ, T*Q,
/// TQ (+) T*Q) use one global chart with names q1..qn, v1..vn, p1..pn.
class Chart {
public:
    Chart(std::vector<std::string> names, std::vector<Role> roles);

    static Chart configuration(std::size_t n);  ///< (q)
    static Chart tangent(std::size_t n);        ///< (q, v)
    static Chart cotangent(std::size_t n);      ///< (q, p)
    static Chart pontryagin(std::size_t n);     ///< (q, v, p)

    std::size_t size() const { return names_.size(); }
    std::size_t dimension() const { return n_; }  ///< number of position coordinates
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    Role role(std::size_t i) const { return roles_[i]; }
    std::optional<std::size_t> index_of(const std::string& name) const;
    bool contains(const std::string& name) const { return index_of(name).has_value(); }

    friend bool operator==(const Chart&, const Chart&) = default;

private:
    std::vector<std::string> names_;
    std::vector<Role> roles_;
    std::size_t n_ = 0;
};

std::string position_name(std::size_t a);  ///< "q{a+1}"
std::string velocity_name(std::size_t a);  ///< "v{a+1}"
std::string momentum_name(std::size_t a);  ///< "p{a+1}"

}  // namespace degenlag
