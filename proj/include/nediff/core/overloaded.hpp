#ifndef NEDIFF_CORE_OVERLOADED_HPP
#define NEDIFF_CORE_OVERLOADED_HPP

namespace nediff {

/// Visitor built from lambdas, for std::visit.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace nediff

#endif  // NEDIFF_CORE_OVERLOADED_HPP
