#include "spl/random.hpp"

namespace spl {

Image random_image(const Shape& shape, Rng& rng, double lo, double hi, Range range) {
  Image img(shape, range);
  for (double& s : img.data()) s = rng.uniform(lo, hi);
  return img;
}

}  // namespace spl
