#ifndef FLOWSIM_ABILITY_HPP
#define FLOWSIM_ABILITY_HPP

#include <boost/container/small_vector.hpp>

namespace flowsim {

/// k-component ability vector. k is small (1 in the built-in testbed, where
/// the single component is the agent's age), so inline storage is used.
using AbilityVector = boost::container::small_vector<double, 4>;

/// Euclidean distance between two ability vectors of equal dimension.
/// Throws std::invalid_argument on dimension mismatch.
double euclidean_distance(const AbilityVector& a, const AbilityVector& b);

} // namespace flowsim

#endif
