#include "dencomb/denoise.hpp"
#include "dencomb/error.hpp"

namespace dencomb {

const char* to_string(BoostRule r) {
  switch (r) {
    case BoostRule::twicing: return "twicing";
    case BoostRule::osher: return "osher";
    case BoostRule::charest_milanfar: return "charest_milanfar";
    case BoostRule::talebi_milanfar: return "talebi_milanfar";
    case BoostRule::sos: return "sos";
  }
  return "?";
}

BoostRule boost_rule_from_string(const std::string& name) {
  for (auto r : {BoostRule::twicing, BoostRule::osher, BoostRule::charest_milanfar, BoostRule::talebi_milanfar,
                 BoostRule::sos}) {
    if (name == to_string(r)) return r;
  }
  throw InvalidParameter("unknown booster rule '" + name + "'");
}

std::vector<Image> boost_iterates(const BoosterSpec& spec, const Image& noisy, const Image& initial) {
  if (spec.iterations < 1) throw InvalidParameter("booster needs at least one iteration");
  check_same_shape(noisy, initial, "boost");
  const auto B = [&](const Image& x) { return denoise(spec.inner, x); };

  std::vector<Image> iterates;
  iterates.reserve(static_cast<std::size_t>(spec.iterations));
  Image current = initial;
  Image residual_sum = Image::Zero(noisy.rows(), noisy.cols());
  for (int t = 0; t < spec.iterations; ++t) {
    Image next;
    switch (spec.rule) {
      case BoostRule::twicing:
      case BoostRule::talebi_milanfar: next = B(noisy - current) + current; break;
      case BoostRule::osher: next = B(noisy + residual_sum); break;
      case BoostRule::charest_milanfar: next = noisy + (current - B(current)); break;
      case BoostRule::sos: next = B(noisy + current) - current; break;
    }
    check_same_shape(next, noisy, "boost");
    if (spec.rule == BoostRule::osher) residual_sum += noisy - next;
    current = next;
    iterates.push_back(current);
  }
  return iterates;
}

Image boost(const BoosterSpec& spec, const Image& noisy, const Image& initial) {
  return boost_iterates(spec, noisy, initial).back();
}

}  // namespace dencomb
