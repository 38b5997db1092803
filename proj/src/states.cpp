#include "eclone/states.hpp"

#include <string>

#include "eclone/cloner.hpp"
#include "eclone/error.hpp"

namespace eclone::states {

DensityMatrix ideal_clone(const Labels& labels) {
  ComplexMatrix m = ComplexMatrix::projector(bell::phi_plus()) * (4.0 / 9.0);
  m += ComplexMatrix::identity(4) * (5.0 / 36.0);
  return DensityMatrix(labels, std::move(m));
}

DensityMatrix named(std::string_view name, const Labels& labels) {
  if (name == "sigma") return ideal_clone(labels);
  if (name == "mixed") return DensityMatrix::maximally_mixed(labels);
  const PureState psi = cloner::InputSpec::parse(name).state();
  return DensityMatrix::from_pure(psi.relabeled(labels));
}

}  // namespace eclone::states
